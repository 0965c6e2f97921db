#include "lowfit/emv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lowfit {

namespace {

Grid make_grid(const EmvInstance& inst, const EmvParams& params) {
  if (params.grid_override) return *params.grid_override;
  double eps = params.eps_grid > 0 ? params.eps_grid : params.eps;
  return build_emv_grid(eps, inst.k, inst.delta, inst.mean_sq);
}

std::vector<int> anchor_list(const AnchorPolicy& policy, int n, Rng& rng) {
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  switch (policy.kind) {
    case AnchorPolicy::Kind::All:
      return all;
    case AnchorPolicy::Kind::Fixed:
      for (int a : policy.fixed)
        if (a < 0 || a >= n) throw Error(Err::BadInput, "anchor index out of range");
      return policy.fixed;
    case AnchorPolicy::Kind::Sample: {
      std::vector<int> picked;
      int want = std::min(policy.count, n);
      while (static_cast<int>(picked.size()) < want) {
        int a = rng.uniform_int(n);
        if (std::find(picked.begin(), picked.end(), a) == picked.end()) picked.push_back(a);
      }
      return picked;
    }
  }
  return all;
}

PeConstraint ball_constraint(const EmvInstance& inst, double slack) {
  PeConstraint con;
  con.rel = Rel::Le;
  con.rhs = (6.0 + slack) * inst.mean_sq;
  con.name = "ball";
  for (int i = 0; i < inst.n; ++i) {
    Junta f;
    f.support = {i};
    f.eval = [](const std::vector<Vec>& pts) { return sq_norm(pts[0]); };
    con.terms.push_back({std::move(f), 1.0 / inst.n});
  }
  return con;
}

}  // namespace

std::vector<PeTerm> emv_objective_terms(const EmvInstance& inst) {
  std::vector<PeTerm> terms;
  double w = 2.0 / (static_cast<double>(inst.n) * inst.n);
  for (int i = 0; i < inst.n; ++i) {
    for (int j = i + 1; j < inst.n; ++j) {
      Junta f;
      f.support = {i, j};
      double dij = inst.d[i][j];
      f.eval = [dij](const std::vector<Vec>& pts) {
        double r = dij - dist(pts[0], pts[1]);
        return r * r;
      };
      terms.push_back({std::move(f), w});
    }
  }
  return terms;
}

EmvResult solve_emv(const EmvInstance& inst, const EmvParams& params) {
  if (!(params.eps > 0 && params.eps < 1)) throw Error(Err::BadEpsilon, "need 0 < eps < 1");
  if (params.degree < params.strategy.total_size() + 2)
    throw Error(Err::DegreeTooLow, "need degree >= seed size + 2");
  Rng master(params.rng_seed);
  EmvResult result;
  result.grid = make_grid(inst, params);
  Rng anchor_rng = master.derive(17);
  std::vector<int> anchors = anchor_list(params.anchors, inst.n, anchor_rng);
  result.anchors_tried = anchors;

  Vec origin(inst.k, 0.0);
  std::vector<PeTerm> objective = emv_objective_terms(inst);
  std::vector<PeConstraint> constraints = {ball_constraint(inst, params.ball_slack)};

  struct AnchorOut {
    bool feasible = false;
    double lp_value = 0;
    std::vector<RoundingReport> reports;
    std::vector<Vec> best_points;
    double best_obj = std::numeric_limits<double>::infinity();
  };
  std::vector<AnchorOut> outs(anchors.size());

  parallel_for(static_cast<int>(anchors.size()), params.parallelism, [&](int ai) {
    int a = anchors[ai];
    Rng rng_a = master.derive(1000 + a);
    VariableSpace space = VariableSpace::from_grid(inst.n, inst.k, result.grid, params.degree);

    std::vector<int> pool;
    for (int i = 0; i < inst.n; ++i)
      if (i != a) pool.push_back(i);

    bool greedy = params.strategy.kind == SeedStrategy::Kind::GreedyPotential;
    std::vector<Support> seed_sets;
    std::vector<Support> closure_sets;
    if (greedy) {
      // Closure over every candidate set so the selection can go anywhere.
      SeedStrategy ex = SeedStrategy::exhaustive(params.strategy.total_size());
      Rng tmp = rng_a.derive(1);
      closure_sets = select_seed_sets(ex, {}, pool, nullptr, 0, 0, tmp);
    } else {
      Rng seed_rng = rng_a.derive(1);
      std::vector<double> row(inst.n, 0.0);
      for (int i = 0; i < inst.n; ++i)
        for (int j = 0; j < inst.n; ++j) row[i] += inst.d[i][j] * inst.d[i][j] / inst.n;
      seed_sets = select_seed_sets(params.strategy, row, pool, nullptr, 0, 0, seed_rng);
      closure_sets = seed_sets;
    }

    SaRelaxation rel =
        build_sa_relaxation(space, objective, constraints, {{a, origin}}, closure_sets);
    LpSolution sol = solve(rel.lp);
    if (sol.status != LpStatus::Optimal) return;  // infeasible anchor
    AnchorOut& out = outs[ai];
    out.feasible = true;
    out.lp_value = sol.objective;
    PseudoDistribution mu = rel.decode(sol);

    if (greedy) {
      Rng greedy_rng = rng_a.derive(2);
      double q = space.q(pool[0]);
      double l1 = inst.mean_sq > 0 ? 1.0 / inst.mean_sq : 1.0;
      double l2 = q > 1 ? 1.0 / std::log(q) : 1.0;
      seed_sets = select_seed_sets(params.strategy, {}, pool, &mu, l1, l2, greedy_rng);
    }

    auto eval = [&](const std::vector<Vec>& pts) { return emv_objective(inst, pts); };
    for (std::size_t si = 0; si < seed_sets.size(); ++si) {
      Rng round_rng = rng_a.derive(100 + si);
      RoundOutcome ro = condition_and_round(mu, seed_sets[si], eval, params.repeats, round_rng);
      for (auto& rep : ro.all) {
        rep.anchor = a;
        rep.lp_value = sol.objective;
        out.reports.push_back(rep);
      }
      if (ro.best.objective < out.best_obj) {
        out.best_obj = ro.best.objective;
        out.best_points = ro.best_points;
      }
    }
  });

  double best_obj = std::numeric_limits<double>::infinity();
  int best_anchor = -1;
  result.min_anchor_lp = std::numeric_limits<double>::infinity();
  for (std::size_t ai = 0; ai < anchors.size(); ++ai) {
    const AnchorOut& out = outs[ai];
    if (!out.feasible) {
      ++result.anchors_infeasible;
      continue;
    }
    result.min_anchor_lp = std::min(result.min_anchor_lp, out.lp_value);
    for (const auto& rep : out.reports) result.reports.push_back(rep);
    if (out.best_obj < best_obj) {
      best_obj = out.best_obj;
      best_anchor = static_cast<int>(ai);
    }
  }
  if (best_anchor < 0)
    throw Error(Err::AllAnchorsInfeasible,
                "every anchored relaxation was infeasible; the discretization likely "
                "violates the norm ball");
  result.best_lp_value = outs[best_anchor].lp_value;
  result.embedding.points = outs[best_anchor].best_points;
  result.embedding.objective = best_obj;
  std::ostringstream prov;
  prov.precision(17);
  prov << "{\"anchor\":" << anchors[best_anchor] << ",\"rng_seed\":" << params.rng_seed
       << ",\"lp_value\":" << result.best_lp_value << ",\"grid_size\":" << result.grid.size()
       << "}";
  result.embedding.provenance = prov.str();
  return result;
}

double lp_lower_bound(const EmvInstance& inst, int anchor, const EmvParams& params) {
  if (anchor < 0 || anchor >= inst.n) throw Error(Err::BadInput, "anchor out of range");
  Grid grid = make_grid(inst, params);
  VariableSpace space = VariableSpace::from_grid(inst.n, inst.k, grid, params.degree);
  Vec origin(inst.k, 0.0);
  // Degree >= 3 strengthens the relaxation with the full triple level.
  std::vector<Support> closure;
  if (params.degree >= 3)
    for (int i = 0; i < inst.n; ++i) closure.push_back({i});
  SaRelaxation rel = build_sa_relaxation(space, emv_objective_terms(inst),
                                         {ball_constraint(inst, params.ball_slack)},
                                         {{anchor, origin}}, closure);
  LpSolution sol = solve(rel.lp);
  if (sol.status != LpStatus::Optimal)
    throw Error(Err::Infeasible, "anchored relaxation infeasible");
  return sol.objective;
}

}  // namespace lowfit
