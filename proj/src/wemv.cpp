#include "lowfit/wemv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lowfit {

namespace {

// Cyclic Jacobi eigensolver for small symmetric matrices (row-major).
void symmetric_eigen(std::vector<double> a, int n, std::vector<double>& eigvals,
                     std::vector<double>& eigvecs) {
  eigvecs.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) eigvecs[static_cast<std::size_t>(i) * n + i] = 1.0;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    if (off < 1e-24) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a[p * n + q];
        if (std::abs(apq) < 1e-18) continue;
        double theta = (a[q * n + q] - a[p * n + p]) / (2 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1.0 / std::sqrt(t * t + 1), s = t * c;
        for (int r = 0; r < n; ++r) {
          double arp = a[r * n + p], arq = a[r * n + q];
          a[r * n + p] = c * arp - s * arq;
          a[r * n + q] = s * arp + c * arq;
        }
        for (int r = 0; r < n; ++r) {
          double apr = a[p * n + r], aqr = a[q * n + r];
          a[p * n + r] = c * apr - s * aqr;
          a[q * n + r] = s * apr + c * aqr;
        }
        for (int r = 0; r < n; ++r) {
          double vrp = eigvecs[r * n + p], vrq = eigvecs[r * n + q];
          eigvecs[static_cast<std::size_t>(r) * n + p] = c * vrp - s * vrq;
          eigvecs[static_cast<std::size_t>(r) * n + q] = s * vrp + c * vrq;
        }
      }
    }
  }
  eigvals.resize(n);
  for (int i = 0; i < n; ++i) eigvals[i] = a[static_cast<std::size_t>(i) * n + i];
}

std::vector<PeTerm> weighted_objective_terms(const WeightedEmvInstance& inst) {
  int n = inst.base.n;
  double wsum = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) wsum += inst.w[i][j];
  std::vector<PeTerm> terms;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (inst.w[i][j] == 0.0) continue;
      Junta f;
      f.support = {i, j};
      double dij = inst.base.d[i][j];
      f.eval = [dij](const std::vector<Vec>& pts) {
        double r = dij - dist(pts[0], pts[1]);
        return r * r;
      };
      terms.push_back({std::move(f), 2.0 * inst.w[i][j] / wsum});
    }
  }
  return terms;
}

}  // namespace

double check_regularity(const Matrix& w) {
  int n = static_cast<int>(w.size());
  if (n == 0) throw Error(Err::BadInput, "empty weight matrix");
  std::vector<double> sums(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(w[i].size()) != n) throw Error(Err::DimensionMismatch, "ragged matrix");
    for (int j = 0; j < n; ++j) sums[i] += w[i][j];
  }
  std::vector<double> sorted = sums;
  std::sort(sorted.begin(), sorted.end());
  double median = sorted[n / 2];
  std::string bad;
  for (int i = 0; i < n; ++i)
    if (std::abs(sums[i] - median) > 1e-9) bad += (bad.empty() ? "" : ",") + std::to_string(i);
  if (!bad.empty()) throw Error(Err::NotRegular, "row sums deviate at rows {" + bad + "}");
  return median / n;
}

WemvResult solve_wemv(const WeightedEmvInstance& inst, const WemvParams& params, bool psd_cuts) {
  check_regularity(inst.w);
  const int n = inst.base.n;
  const int k = inst.base.k;
  if (params.degree < params.strategy.total_size() + 2)
    throw Error(Err::DegreeTooLow, "need degree >= seed size + 2");
  WemvResult result;
  if (params.grid_override) {
    result.grid = *params.grid_override;
  } else {
    double wms = inst.weighted_mean_sq;
    double step = params.eps * std::sqrt(std::max(wms, 1e-300) / k);
    double range = n * inst.base.delta;
    if (params.clip_grid) range = std::min(range, params.clip_c * std::sqrt(wms) / params.eps);
    if (wms == 0.0) {
      result.grid = build_uniform_grid(0, 0, 1);
    } else {
      if (params.grid_cap > 1) step = std::max(step, 2.0 * range / (params.grid_cap - 1));
      result.grid = build_uniform_grid(-range, range, step);
    }
  }

  Rng master(params.rng_seed);
  VariableSpace space = VariableSpace::from_grid(n, k, result.grid, params.degree);

  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  std::vector<double> row(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) row[i] += inst.w[i][j] * inst.base.d[i][j] * inst.base.d[i][j];
  Rng seed_rng = master.derive(1);
  bool greedy = params.strategy.kind == SeedStrategy::Kind::GreedyPotential;
  std::vector<Support> seed_sets, closure_sets;
  if (greedy) {
    Rng tmp = seed_rng;
    closure_sets = select_seed_sets(SeedStrategy::exhaustive(params.strategy.total_size()), {},
                                    pool, nullptr, 0, 0, tmp);
  } else {
    seed_sets = select_seed_sets(params.strategy, row, pool, nullptr, 0, 0, seed_rng);
    closure_sets = seed_sets;
  }

  SaRelaxation rel =
      build_sa_relaxation(space, weighted_objective_terms(inst), {}, {}, closure_sets);

  LpSolution sol;
  if (psd_cuts) {
    const int dim = n * k;
    CutOracle oracle = [&](const LpSolution& s) -> std::optional<LpRow> {
      PseudoDistribution mu = rel.decode(s);
      std::vector<double> m(static_cast<std::size_t>(dim) * dim, 0.0);
      for (int i = 0; i < n; ++i) {
        std::vector<double> ti = mu.table({i});
        for (int a = 0; a < space.q(i); ++a)
          for (int c1 = 0; c1 < k; ++c1)
            for (int c2 = 0; c2 < k; ++c2)
              m[(i * k + c1) * static_cast<std::size_t>(dim) + i * k + c2] +=
                  ti[a] * space.alphabet[i][a][c1] * space.alphabet[i][a][c2];
        for (int j = i + 1; j < n; ++j) {
          std::vector<double> tij = mu.table({i, j});
          for (int a = 0; a < space.q(i); ++a)
            for (int b = 0; b < space.q(j); ++b) {
              double pr = tij[static_cast<std::size_t>(a) * space.q(j) + b];
              if (pr == 0.0) continue;
              for (int c1 = 0; c1 < k; ++c1)
                for (int c2 = 0; c2 < k; ++c2) {
                  double v = pr * space.alphabet[i][a][c1] * space.alphabet[j][b][c2];
                  m[(i * k + c1) * static_cast<std::size_t>(dim) + j * k + c2] += v;
                  m[(j * k + c2) * static_cast<std::size_t>(dim) + i * k + c1] += v;
                }
            }
        }
      }
      std::vector<double> vals, vecs;
      symmetric_eigen(m, dim, vals, vecs);
      int worst = 0;
      for (int e = 1; e < dim; ++e)
        if (vals[e] < vals[worst]) worst = e;
      if (vals[worst] >= -1e-7) return std::nullopt;
      // Cut: sum_{ij,ab} (v_i . x_ia)(v_j . x_jb) mu_ij(a,b) >= 0.
      LpRow cut;
      cut.rel = Rel::Ge;
      cut.rhs = 0.0;
      cut.name = "psd_cut";
      std::vector<Vec> proj(n);  // proj[i][a] = v_i . alphabet point a
      for (int i = 0; i < n; ++i) {
        proj[i].resize(space.q(i));
        for (int a = 0; a < space.q(i); ++a) {
          double s2 = 0;
          for (int c = 0; c < k; ++c)
            s2 += vecs[static_cast<std::size_t>(i * k + c) * dim + worst] *
                  space.alphabet[i][a][c];
          proj[i][a] = s2;
        }
      }
      for (int i = 0; i < n; ++i) {
        int off = rel.offsets.at({i});
        for (int a = 0; a < space.q(i); ++a)
          cut.coeffs.push_back({off + a, proj[i][a] * proj[i][a]});
        for (int j = i + 1; j < n; ++j) {
          int offp = rel.offsets.at({i, j});
          for (int a = 0; a < space.q(i); ++a)
            for (int b = 0; b < space.q(j); ++b)
              cut.coeffs.push_back(
                  {offp + a * space.q(j) + b, 2.0 * proj[i][a] * proj[j][b]});
        }
      }
      return cut;
    };
    CutResult cr = solve_with_cuts(rel.lp, oracle, params.psd_cut_rounds);
    sol = cr.solution;
    result.cuts_added = cr.cuts_added;
  } else {
    sol = solve(rel.lp);
  }
  if (sol.status != LpStatus::Optimal)
    throw Error(Err::Infeasible, "weighted relaxation did not solve");
  result.lp_value = sol.objective;
  PseudoDistribution mu = rel.decode(sol);

  if (greedy) {
    Rng greedy_rng = master.derive(2);
    double q = space.q(0);
    double l1 = inst.weighted_mean_sq > 0 ? 1.0 / inst.weighted_mean_sq : 1.0;
    double l2 = q > 1 ? 1.0 / std::log(q) : 1.0;
    seed_sets = select_seed_sets(params.strategy, {}, pool, &mu, l1, l2, greedy_rng);
  }

  auto eval = [&](const std::vector<Vec>& pts) { return weighted_objective(inst, pts); };
  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<Vec> best_points;
  for (std::size_t si = 0; si < seed_sets.size(); ++si) {
    Rng round_rng = master.derive(100 + si);
    RoundOutcome ro = condition_and_round(mu, seed_sets[si], eval, params.repeats, round_rng);
    for (auto& rep : ro.all) {
      rep.lp_value = sol.objective;
      result.reports.push_back(rep);
    }
    if (ro.best.objective < best_obj) {
      best_obj = ro.best.objective;
      best_points = ro.best_points;
    }
  }
  result.embedding.points = best_points;
  result.embedding.objective = best_obj;
  std::ostringstream prov;
  prov.precision(17);
  prov << "{\"rng_seed\":" << params.rng_seed << ",\"lp_value\":" << result.lp_value
       << ",\"cuts\":" << result.cuts_added << ",\"grid_size\":" << result.grid.size() << "}";
  result.embedding.provenance = prov.str();
  return result;
}

double conductance(const Matrix& w, const std::vector<int>& a_set) {
  int n = static_cast<int>(w.size());
  std::vector<char> in(n, 0);
  for (int v : a_set) {
    if (v < 0 || v >= n) throw Error(Err::BadInput, "vertex out of range");
    in[v] = 1;
  }
  double vol = 0, boundary = 0;
  for (int i = 0; i < n; ++i) {
    if (!in[i]) continue;
    for (int j = 0; j < n; ++j) {
      vol += w[i][j];
      if (!in[j]) boundary += w[i][j];
    }
  }
  if (vol <= 0) return 1.0;
  return boundary / vol;
}

double multiway_conductance_bruteforce(const Matrix& w, int kparts) {
  int n = static_cast<int>(w.size());
  if (n > 10) throw Error(Err::TooLarge, "brute-force conductance limited to n <= 10");
  if (kparts < 1) throw Error(Err::BadInput, "need kparts >= 1");
  std::vector<int> label(n, 0);  // 0 = unused, 1..kparts = part id
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    bool ok = true;
    for (int p = 1; p <= kparts && ok; ++p)
      ok = std::any_of(label.begin(), label.end(), [&](int l) { return l == p; });
    if (ok) {
      double worst = 0;
      for (int p = 1; p <= kparts; ++p) {
        std::vector<int> part;
        for (int i = 0; i < n; ++i)
          if (label[i] == p) part.push_back(i);
        worst = std::max(worst, conductance(w, part));
      }
      best = std::min(best, worst);
    }
    int pos = n - 1;
    while (pos >= 0 && ++label[pos] > kparts) label[pos--] = 0;
    if (pos < 0) break;
  }
  return best;
}

}  // namespace lowfit
