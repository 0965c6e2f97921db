#include "lowfit/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lowfit {

namespace {

void subsets_of(const std::vector<int>& pool, int size, std::vector<Support>& out) {
  Support cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (static_cast<int>(cur.size()) == size) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < pool.size(); ++i) {
      cur.push_back(pool[i]);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

int draw_weighted(const std::vector<int>& pool, const std::vector<double>& w, Rng& rng) {
  double total = 0;
  for (int i : pool) total += w[i];
  if (total <= 0) return pool[rng.uniform_int(static_cast<int>(pool.size()))];
  double u = rng.uniform() * total, acc = 0;
  for (int i : pool) {
    acc += w[i];
    if (u < acc) return i;
  }
  return pool.back();
}

}  // namespace

std::vector<Support> select_seed_sets(const SeedStrategy& strategy,
                                      const std::vector<double>& row_weights,
                                      const std::vector<int>& pool,
                                      const PseudoDistribution* mu, double lambda1,
                                      double lambda2, Rng& rng) {
  if (strategy.total_size() > static_cast<int>(pool.size()))
    throw Error(Err::SizeTooLarge, "seed size exceeds candidate pool");
  if (strategy.total_size() == 0) return {Support{}};

  switch (strategy.kind) {
    case SeedStrategy::Kind::Exhaustive: {
      std::vector<Support> out;
      subsets_of(pool, strategy.size, out);
      return out;
    }
    case SeedStrategy::Kind::Sampled: {
      Support seed;
      auto taken = [&](int i) { return std::find(seed.begin(), seed.end(), i) != seed.end(); };
      for (int s = 0; s < strategy.size_weighted; ++s) {
        int pick;
        do {
          pick = draw_weighted(pool, row_weights, rng);
        } while (taken(pick));
        seed.push_back(pick);
      }
      for (int s = 0; s < strategy.size_uniform; ++s) {
        int pick;
        do {
          pick = pool[rng.uniform_int(static_cast<int>(pool.size()))];
        } while (taken(pick));
        seed.push_back(pick);
      }
      return {seed};
    }
    case SeedStrategy::Kind::GreedyPotential: {
      if (!mu) throw Error(Err::BadInput, "greedy seed selection needs a pseudo-distribution");
      Support seed;
      PseudoDistribution cur = *mu;
      auto potential = [&](const PseudoDistribution& m) {
        return lambda1 * m.variance_potential() + lambda2 * m.entropy_potential(strategy.trunc_c);
      };
      for (int step = 0; step < strategy.size; ++step) {
        int best_var = -1, best_mode = -1;
        double best_exp = std::numeric_limits<double>::infinity();
        for (int v : pool) {
          if (std::find(seed.begin(), seed.end(), v) != seed.end()) continue;
          if (cur.is_conditioned(v) || cur.space->q(v) == 1) continue;
          std::vector<double> marg = cur.table({v});
          double exp_phi = 0;
          int mode = 0;
          for (int a = 0; a < cur.space->q(v); ++a) {
            if (marg[a] > marg[mode]) mode = a;
            if (marg[a] <= 1e-12) continue;
            exp_phi += marg[a] * potential(cur.condition(v, a));
          }
          if (exp_phi < best_exp - 1e-15) {
            best_exp = exp_phi;
            best_var = v;
            best_mode = mode;
          }
        }
        if (best_var < 0) break;
        seed.push_back(best_var);
        // Continue the lookahead from the most likely branch.
        cur = cur.condition(best_var, best_mode);
      }
      std::sort(seed.begin(), seed.end());
      return {seed};
    }
  }
  return {Support{}};
}

std::vector<Support> select_seed(const SeedStrategy& strategy, const EmvInstance& inst,
                                 const PseudoDistribution* mu, Rng& rng) {
  std::vector<double> row(inst.n, 0.0);
  for (int i = 0; i < inst.n; ++i) {
    for (int j = 0; j < inst.n; ++j) row[i] += inst.d[i][j] * inst.d[i][j];
    row[i] /= inst.n;
  }
  std::vector<int> pool(inst.n);
  for (int i = 0; i < inst.n; ++i) pool[i] = i;
  double q = mu && mu->space->n > 0 ? static_cast<double>(mu->space->q(0)) : 2.0;
  double lambda1 = inst.mean_sq > 0 ? 1.0 / inst.mean_sq : 1.0;
  double lambda2 = q > 1.0 ? 1.0 / std::log(q) : 1.0;
  return select_seed_sets(strategy, row, pool, mu, lambda1, lambda2, rng);
}

std::vector<int> round_independent(const PseudoDistribution& mu, Rng& rng) {
  const int n = mu.space->n;
  std::vector<int> out(n, -1);
  for (const auto& f : mu.conditioned_on) out[f.var] = f.value_index;
  for (int i = 0; i < n; ++i) {
    if (out[i] >= 0) continue;
    out[i] = mu.sample_local({i}, rng)[0];
  }
  return out;
}

std::vector<Vec> points_from_assignment(const PseudoDistribution& mu,
                                        const std::vector<int>& assignment) {
  std::vector<Vec> pts(mu.space->n);
  for (int i = 0; i < mu.space->n; ++i) pts[i] = mu.space->alphabet[i][assignment[i]];
  return pts;
}

RoundOutcome condition_and_round(const PseudoDistribution& mu, const Support& seed,
                                 const std::function<double(const std::vector<Vec>&)>& objective,
                                 int repeats, Rng& rng) {
  RoundOutcome out;
  bool have_best = false;
  for (int rep = 0; rep < repeats; ++rep) {
    Stopwatch sw;
    Rng r = rng.derive(rep);
    RoundingReport rep_report;
    rep_report.repetition = rep;
    rep_report.rng_seed = r.seed();
    rep_report.seed = seed;

    PseudoDistribution cur = mu;
    if (!seed.empty()) {
      Support sorted_seed = seed;
      std::sort(sorted_seed.begin(), sorted_seed.end());
      std::vector<int> values = mu.sample_local(sorted_seed, r);
      for (int var : seed) {
        std::size_t pos =
            std::lower_bound(sorted_seed.begin(), sorted_seed.end(), var) - sorted_seed.begin();
        rep_report.seed_values.push_back(mu.space->alphabet[var][values[pos]]);
        cur = cur.condition(var, values[pos]);
      }
    }
    std::vector<int> assign = round_independent(cur, r);
    std::vector<Vec> pts = points_from_assignment(cur, assign);
    rep_report.objective = objective(pts);
    rep_report.wall_ms = sw.ms();
    if (!have_best || rep_report.objective < out.best.objective) {
      have_best = true;
      out.best = rep_report;
      out.best_points = pts;
    }
    out.all.push_back(std::move(rep_report));
  }
  return out;
}

}  // namespace lowfit
