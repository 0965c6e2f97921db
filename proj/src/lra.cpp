#include "lowfit/lra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace lowfit {

namespace {

double ipow(double x, int p) {
  double r = 1;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

// Minimize sum_j (A_j - t * v_j)^p over t (convex for even p): bisect the
// monotone derivative, then polish with Newton.
double best_scalar(const std::vector<double>& a_row, const Vec& v, int p) {
  double vnorm = 0;
  for (double x : v) vnorm += std::abs(x);
  if (vnorm == 0) return 0.0;
  auto deriv = [&](double t) {
    double g = 0;
    for (std::size_t j = 0; j < v.size(); ++j)
      g -= p * v[j] * ipow(a_row[j] - t * v[j], p - 1);
    return g;
  };
  double lo = -1, hi = 1;
  while (deriv(lo) > 0) lo *= 2;
  while (deriv(hi) < 0) hi *= 2;
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    if (deriv(mid) <= 0) lo = mid;
    else hi = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {  // Newton polish
    double g = deriv(t);
    double h = 0;
    for (std::size_t j = 0; j < v.size(); ++j)
      h += p * (p - 1) * v[j] * v[j] * ipow(a_row[j] - t * v[j], p - 2);
    if (h <= 0) break;
    double step = g / h;
    t -= step;
    if (std::abs(step) < 1e-12 * std::max(1.0, std::abs(t))) break;
  }
  return t;
}

std::vector<PeTerm> lra_objective_terms(const LraInstance& inst) {
  std::vector<PeTerm> objective;
  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < inst.m; ++j) {
      Junta f;
      f.support = {i, inst.n + j};
      double aij = inst.a[i][j];
      int p = inst.p;
      f.eval = [aij, p](const std::vector<Vec>& pts) {
        return ipow(aij - pts[0][0] * pts[1][0], p);
      };
      objective.push_back({std::move(f), 1.0});
    }
  return objective;
}

// Constraints for monomials r = 1 and r = x^c, c = 1..p, on both norm sides.
// The c = p instances make the degree-zero objective term collapse to
// s_u * s_v exactly.
std::vector<PeConstraint> lra_norm_constraints(int n, int m, int p, double su, double sv) {
  std::vector<PeConstraint> cons;
  auto side = [&](bool u_side, double target) {
    int lo = u_side ? 0 : n;
    int hi = u_side ? n : n + m;
    PeConstraint c0;
    c0.rel = Rel::Eq;
    c0.rhs = target;
    c0.name = u_side ? "norm_u" : "norm_v";
    for (int i = lo; i < hi; ++i) {
      Junta f;
      f.support = {i};
      f.eval = [p](const std::vector<Vec>& pts) { return ipow(pts[0][0], p); };
      c0.terms.push_back({std::move(f), 1.0});
    }
    cons.push_back(std::move(c0));
    for (int c = 1; c <= p; ++c) {
      for (int r = 0; r < n + m; ++r) {
        PeConstraint cc;
        cc.rel = Rel::Eq;
        cc.rhs = 0.0;
        cc.name = (u_side ? "mon_u_" : "mon_v_") + std::to_string(r) + "_" + std::to_string(c);
        for (int i = lo; i < hi; ++i) {
          Junta f;
          if (i == r) {
            f.support = {i};
            f.eval = [p, c](const std::vector<Vec>& pts) { return ipow(pts[0][0], p + c); };
          } else {
            f.support = {std::min(i, r), std::max(i, r)};
            bool var_first = i < r;
            f.eval = [p, c, var_first](const std::vector<Vec>& pts) {
              double xi = var_first ? pts[0][0] : pts[1][0];
              double xr = var_first ? pts[1][0] : pts[0][0];
              return ipow(xi, p) * ipow(xr, c);
            };
          }
          cc.terms.push_back({std::move(f), 1.0});
        }
        Junta fr;
        fr.support = {r};
        fr.eval = [c](const std::vector<Vec>& pts) { return ipow(pts[0][0], c); };
        cc.terms.push_back({std::move(fr), -target});
        cons.push_back(std::move(cc));
      }
    }
  };
  side(true, su);
  side(false, sv);
  return cons;
}

VariableSpace lra_space(const LraInstance& inst, const Grid& sigma, int degree) {
  std::vector<Vec> pts;
  for (double x : sigma.values) pts.push_back({x});
  return VariableSpace::uniform(inst.n + inst.m, 1, pts, degree);
}

}  // namespace

double lra_cell_lp_value(const LraInstance& inst, const Grid& sigma, int degree, double s_u,
                         double s_v) {
  VariableSpace space = lra_space(inst, sigma, degree);
  SaRelaxation rel =
      build_sa_relaxation(space, lra_objective_terms(inst),
                          lra_norm_constraints(inst.n, inst.m, inst.p, s_u, s_v), {}, {});
  LpSolution sol = solve(rel.lp);
  if (sol.status != LpStatus::Optimal) throw Error(Err::Infeasible, "norm cell infeasible");
  return sol.objective;
}

Grid build_norm_grid(const LraInstance& inst, double eps) {
  double root = std::sqrt(inst.norm_p);
  if (root == 0.0) return build_uniform_grid(0, 0, 1);
  double n3 = static_cast<double>(inst.n) * inst.n * inst.n;
  double step = ipow(eps, inst.p) / n3 * root;
  Grid g = build_uniform_grid(0.0, 2.0 * root, step);
  double bound = std::ldexp(1.0, inst.p) * root;  // magnitude cap on norm targets
  std::erase_if(g.values, [&](double v) { return v < 0.0 || v > bound + 1e-12 * bound; });
  return g;
}

LraBaseline lra_alternating_baseline(const LraInstance& inst, int restarts, Rng& rng,
                                     const std::optional<std::pair<Vec, Vec>>& warm) {
  const int n = inst.n, m = inst.m, p = inst.p;
  double scale = std::pow(std::max(inst.norm_p, 1e-300), 1.0 / (2.0 * p));
  LraBaseline best;
  best.objective = std::numeric_limits<double>::infinity();
  std::vector<double> col(n);
  for (int r = 0; r < std::max(1, restarts); ++r) {
    Rng rr = rng.derive(r);
    Vec u(n, 0.0), v(m, 0.0);
    if (r == 0 && warm) {
      u = warm->first;
      v = warm->second;
    } else {
      for (double& x : v) x = rr.uniform(-scale, scale);
    }
    std::vector<double> trace;
    double obj = lra_objective(inst, u, v);
    for (int it = 0; it < 500; ++it) {
      for (int i = 0; i < n; ++i) u[i] = best_scalar(inst.a[i], v, p);
      trace.push_back(lra_objective(inst, u, v));
      for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) col[i] = inst.a[i][j];
        v[j] = best_scalar(col, u, p);
      }
      double new_obj = lra_objective(inst, u, v);
      trace.push_back(new_obj);
      if (obj - new_obj <= 1e-10 * std::max(1.0, obj)) {
        obj = std::min(obj, new_obj);
        break;
      }
      obj = new_obj;
    }
    if (obj < best.objective) {
      best.objective = obj;
      best.u = u;
      best.v = v;
      best.residual_trace = trace;
    }
  }
  return best;
}

LraResult solve_lra(const LraInstance& inst, const LraParams& params) {
  const int n = inst.n, m = inst.m, p = inst.p;
  int degree = params.degree > 0 ? params.degree : p + params.seed_size;
  if (degree < p) throw Error(Err::DegreeTooLow, "need degree >= p");
  if (degree < params.seed_size + p)
    throw Error(Err::DegreeTooLow, "need degree >= seed size + p");

  LraResult result;
  double root2p = std::pow(std::max(inst.norm_p, 0.0), 1.0 / (2.0 * p));
  if (params.sigma_override) {
    result.sigma = *params.sigma_override;
  } else if (inst.norm_p == 0.0) {
    result.sigma = build_uniform_grid(0, 0, 1);
  } else {
    double step = ipow(params.eps, p) / (static_cast<double>(n) * n) * root2p;
    if (params.sigma_cap > 1) step = std::max(step, 2.0 * root2p / (params.sigma_cap - 1));
    result.sigma = build_uniform_grid(-root2p, root2p, step);
  }
  result.norm_grid = build_norm_grid(inst, params.eps);

  Rng master(params.rng_seed);

  // Candidate (s_u, s_v) cells: cells near the balanced norms of an
  // alternating-minimization solution, plus random samples (or the full
  // product when norm_sample == 0).
  std::vector<std::pair<double, double>> cells;
  std::set<std::pair<double, double>> seen;
  auto push_cell = [&](double su, double sv) {
    su = result.norm_grid.snap_coord(su);
    sv = result.norm_grid.snap_coord(sv);
    if (seen.insert({su, sv}).second) cells.push_back({su, sv});
  };
  if (params.norm_sample > 0) {
    Rng brng = master.derive(7);
    LraBaseline base = lra_alternating_baseline(inst, 4, brng);
    double su = 0, sv = 0;
    for (double x : base.u) su += ipow(x, p);
    for (double x : base.v) sv += ipow(x, p);
    double balanced = std::sqrt(std::max(su, 0.0) * std::max(sv, 0.0));
    double step = result.norm_grid.size() > 1
                      ? result.norm_grid.values[1] - result.norm_grid.values[0]
                      : 1.0;
    push_cell(balanced, balanced);
    push_cell(balanced + step, balanced + step);
    push_cell(std::max(0.0, balanced - step), std::max(0.0, balanced - step));
    Rng crng = master.derive(8);
    int ns = static_cast<int>(result.norm_grid.values.size());
    for (int s = 0; s < params.norm_sample; ++s)
      push_cell(result.norm_grid.values[crng.uniform_int(ns)],
                result.norm_grid.values[crng.uniform_int(ns)]);
  } else {
    if (static_cast<double>(result.norm_grid.size()) * result.norm_grid.size() > 1e6)
      throw Error(Err::TooLarge, "exhaustive norm loop too large");
    for (double su : result.norm_grid.values)
      for (double sv : result.norm_grid.values) push_cell(su, sv);
  }

  VariableSpace space = lra_space(inst, result.sigma, degree);
  std::vector<PeTerm> objective = lra_objective_terms(inst);

  struct CellOut {
    bool feasible = false;
    double lp_value = 0;
    double q0_gap = 0;
    double best_obj = std::numeric_limits<double>::infinity();
    std::vector<Vec> best_points;
    std::vector<RoundingReport> reports;
  };
  std::vector<CellOut> outs(cells.size());

  parallel_for(static_cast<int>(cells.size()), params.parallelism, [&](int ci) {
    auto [su, sv] = cells[ci];
    Rng cell_rng = master.derive(100 + ci);
    // Seed: uniform subset of v-indices.
    Support seed;
    while (static_cast<int>(seed.size()) < std::min(params.seed_size, m)) {
      int j = n + cell_rng.uniform_int(m);
      if (std::find(seed.begin(), seed.end(), j) == seed.end()) seed.push_back(j);
    }
    std::sort(seed.begin(), seed.end());

    SaRelaxation rel = build_sa_relaxation(space, objective,
                                           lra_norm_constraints(n, m, p, su, sv), {}, {seed});
    LpSolution sol;
    try {
      sol = solve(rel.lp);
    } catch (const Error&) {
      return;
    }
    if (sol.status != LpStatus::Optimal) return;
    CellOut& out = outs[ci];
    out.feasible = true;
    out.lp_value = sol.objective;
    PseudoDistribution mu = rel.decode(sol);

    double cross = 0;  // pE sum_ij u_i^p v_j^p
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) {
        Junta f;
        f.support = {i, n + j};
        f.eval = [p](const std::vector<Vec>& pts) {
          return ipow(pts[0][0], p) * ipow(pts[1][0], p);
        };
        cross += mu.pe(f);
      }
    out.q0_gap = std::abs(cross - su * sv);

    auto eval = [&](const std::vector<Vec>& pts) {
      Vec u(n), v(m);
      for (int i = 0; i < n; ++i) u[i] = pts[i][0];
      for (int j = 0; j < m; ++j) v[j] = pts[n + j][0];
      return lra_objective(inst, u, v);
    };
    Rng round_rng = cell_rng.derive(3);
    RoundOutcome ro = condition_and_round(mu, seed, eval, params.repeats, round_rng);
    for (auto& rep : ro.all) {
      rep.anchor = ci;
      rep.lp_value = sol.objective;
      out.reports.push_back(rep);
    }
    out.best_obj = ro.best.objective;
    out.best_points = ro.best_points;
  });

  int best_cell = -1;
  double best_obj = std::numeric_limits<double>::infinity();
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const CellOut& out = outs[ci];
    if (!out.feasible) {
      ++result.cells_infeasible;
      continue;
    }
    ++result.cells_solved;
    result.q0_identity_gap = std::max(result.q0_identity_gap, out.q0_gap);
    for (const auto& rep : out.reports) result.reports.push_back(rep);
    if (out.best_obj < best_obj) {
      best_obj = out.best_obj;
      best_cell = static_cast<int>(ci);
    }
  }
  if (best_cell < 0) throw Error(Err::Infeasible, "no norm cell produced a feasible relaxation");
  result.objective = best_obj;
  result.best_lp_value = outs[best_cell].lp_value;
  result.best_su = cells[best_cell].first;
  result.best_sv = cells[best_cell].second;
  result.u.resize(n);
  result.v.resize(m);
  for (int i = 0; i < n; ++i) result.u[i] = outs[best_cell].best_points[i][0];
  for (int j = 0; j < m; ++j) result.v[j] = outs[best_cell].best_points[n + j][0];
  std::ostringstream prov;
  prov.precision(17);
  prov << "{\"rng_seed\":" << params.rng_seed << ",\"su\":" << result.best_su
       << ",\"sv\":" << result.best_sv << ",\"cells_solved\":" << result.cells_solved
       << ",\"sigma_size\":" << result.sigma.size() << "}";
  result.provenance = prov.str();
  return result;
}

}  // namespace lowfit
