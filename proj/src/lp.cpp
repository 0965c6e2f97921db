#include "lowfit/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace lowfit {

int LinearProgram::add_row(LpRow row) {
  std::sort(row.coeffs.begin(), row.coeffs.end());
  for (const auto& [idx, c] : row.coeffs) {
    if (idx < 0 || idx >= num_vars) throw Error(Err::BadInput, "row index out of range");
    if (!std::isfinite(c)) throw Error(Err::NonFinite, "row coefficient not finite");
  }
  rows.push_back(std::move(row));
  return static_cast<int>(rows.size()) - 1;
}

void LinearProgram::dump(std::ostream& os) const {
  os << "min";
  for (int j = 0; j < num_vars; ++j)
    if (objective.size() > static_cast<std::size_t>(j) && objective[j] != 0.0)
      os << " " << objective[j] << "*x" << j;
  os << "\n";
  for (const auto& r : rows) {
    if (!r.name.empty()) os << r.name << ": ";
    for (const auto& [j, c] : r.coeffs) os << c << "*x" << j << " ";
    os << (r.rel == Rel::Le ? "<=" : r.rel == Rel::Eq ? "==" : ">=") << " " << r.rhs << "\n";
  }
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr long kMaxIters = 1000000;

// Column-major storage: structural columns first, then slack/surplus columns.
// Artificial columns are implicit unit vectors.
struct Tableau {
  int m = 0;                // rows
  int n_total = 0;          // structural + slack columns (artificials excluded)
  int n_struct = 0;
  std::vector<std::vector<std::pair<int, double>>> cols;
  std::vector<double> b;          // rhs, nonnegative after flips
  std::vector<double> cost;       // phase-2 cost per column
  std::vector<int> basis;         // basic variable per row; >= n_total means artificial
  std::vector<double> binv;       // dense m x m row-major inverse of the basis
  std::vector<double> xb;         // basic variable values
  std::vector<char> is_artificial_row;  // artificial still basic (redundant row)

  double* binv_row(int r) { return binv.data() + static_cast<std::size_t>(r) * m; }

  void column_times_binv(int col, std::vector<double>& out) const {
    std::fill(out.begin(), out.end(), 0.0);
    if (col >= n_total) {  // artificial unit column
      int r = col - n_total;
      for (int i = 0; i < m; ++i) out[i] = binv[static_cast<std::size_t>(i) * m + r];
      return;
    }
    for (const auto& [r, v] : cols[col])
      for (int i = 0; i < m; ++i) out[i] += binv[static_cast<std::size_t>(i) * m + r] * v;
  }
};

struct SimplexRun {
  Tableau t;
  long iterations = 0;

  // y = c_B * Binv for the given costs (artificials costed by caller).
  std::vector<double> dual(const std::vector<double>& cb) const {
    std::vector<double> y(t.m, 0.0);
    for (int i = 0; i < t.m; ++i) {
      double c = cb[i];
      if (c == 0.0) continue;
      const double* row = t.binv.data() + static_cast<std::size_t>(i) * t.m;
      for (int r = 0; r < t.m; ++r) y[r] += c * row[r];
    }
    return y;
  }

  double reduced_cost(int j, const std::vector<double>& y, const std::vector<double>& cost) const {
    double d = cost[j];
    for (const auto& [r, v] : t.cols[j]) d -= y[r] * v;
    return d;
  }

  void pivot(int enter, int leave_row, const std::vector<double>& w) {
    int mm = t.m;
    double piv = w[leave_row];
    double* lr = t.binv.data() + static_cast<std::size_t>(leave_row) * mm;
    for (int r = 0; r < mm; ++r) lr[r] /= piv;
    double xl = t.xb[leave_row] / piv;
    for (int i = 0; i < mm; ++i) {
      if (i == leave_row) continue;
      double f = w[i];
      if (f == 0.0) continue;
      double* ri = t.binv.data() + static_cast<std::size_t>(i) * mm;
      for (int r = 0; r < mm; ++r) ri[r] -= f * lr[r];
      t.xb[i] -= f * xl;
    }
    t.xb[leave_row] = xl;
    t.basis[leave_row] = enter;
  }

  void recompute_xb() {
    for (int i = 0; i < t.m; ++i) {
      double s = 0;
      const double* row = t.binv.data() + static_cast<std::size_t>(i) * t.m;
      for (int r = 0; r < t.m; ++r) s += row[r] * t.b[r];
      t.xb[i] = s;
    }
  }

  // Returns false on unbounded. Cost vector is sized n_total + m so that
  // basic artificials are priced too; they are never entering candidates.
  bool optimize(const std::vector<double>& cost) {
    int stall = 0;
    bool bland = false;
    double last_obj = std::numeric_limits<double>::infinity();
    std::vector<double> w(t.m);
    std::vector<double> cb(t.m);
    for (;;) {
      if (++iterations > kMaxIters)
        throw Error(Err::NumericalFailure, "simplex iteration cap exceeded");
      for (int i = 0; i < t.m; ++i) cb[i] = cost[t.basis[i]];
      std::vector<double> y = dual(cb);
      int enter = -1;
      double best = -kOptTol;  // ascending scan keeps the lowest index on ties
      for (int j = 0; j < t.n_total; ++j) {
        double d = reduced_cost(j, y, cost);
        if (bland) {
          if (d < -kOptTol) {
            enter = j;
            break;
          }
        } else if (d < best) {
          best = d;
          enter = j;
        }
      }
      if (enter < 0) return true;  // optimal
      t.column_times_binv(enter, w);
      int leave = -1;
      double best_ratio = 0;
      for (int i = 0; i < t.m; ++i) {
        if (w[i] > kPivotTol) {
          double ratio = t.xb[i] / w[i];
          if (leave < 0 || ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && t.basis[i] < t.basis[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) return false;  // unbounded
      pivot(enter, leave, w);
      double obj = 0;
      for (int i = 0; i < t.m; ++i) obj += cost[t.basis[i]] * t.xb[i];
      if (obj < last_obj - 1e-12) {
        stall = 0;
        bland = false;
        last_obj = obj;
      } else if (++stall > 256) {
        bland = true;  // anti-cycling fallback
      }
      if (iterations % 512 == 0) recompute_xb();
    }
  }
};

}  // namespace

LpSolution solve(const LinearProgram& lp) {
  const int m = static_cast<int>(lp.rows.size());
  SimplexRun run;
  Tableau& t = run.t;
  t.m = m;
  t.n_struct = lp.num_vars;

  // Count slack/surplus columns.
  int n_slack = 0;
  for (const auto& r : lp.rows)
    if (r.rel != Rel::Eq) ++n_slack;
  t.n_total = lp.num_vars + n_slack;
  t.cols.assign(t.n_total, {});
  t.b.assign(m, 0.0);
  std::vector<double> row_scale(m, 1.0);
  std::vector<char> flipped(m, 0);
  for (int i = 0; i < m; ++i) {
    double mx = std::abs(lp.rows[i].rhs);
    for (const auto& [j, v] : lp.rows[i].coeffs) mx = std::max(mx, std::abs(v));
    row_scale[i] = mx > 0 ? 1.0 / mx : 1.0;
    double srhs = lp.rows[i].rhs * row_scale[i];
    if (srhs < 0) {
      flipped[i] = 1;
      row_scale[i] = -row_scale[i];
      srhs = -srhs;
    }
    t.b[i] = srhs;
  }
  for (int i = 0; i < m; ++i)
    for (const auto& [j, v] : lp.rows[i].coeffs)
      if (v != 0.0) t.cols[j].push_back({i, v * row_scale[i]});
  int slack_at = lp.num_vars;
  std::vector<int> slack_of_row(m, -1);
  for (int i = 0; i < m; ++i) {
    Rel rel = lp.rows[i].rel;
    if (rel == Rel::Eq) continue;
    double sign = rel == Rel::Le ? 1.0 : -1.0;
    if (flipped[i]) sign = -sign;
    t.cols[slack_at].push_back({i, sign});
    if (sign > 0) slack_of_row[i] = slack_at;
    ++slack_at;
  }

  // Initial basis: positive slack where available, artificial otherwise.
  t.basis.assign(m, -1);
  t.binv.assign(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) {
    t.binv[static_cast<std::size_t>(i) * m + i] = 1.0;
    t.basis[i] = slack_of_row[i] >= 0 ? slack_of_row[i] : t.n_total + i;
  }
  t.xb = t.b;

  // Phase 1.
  std::vector<double> cost1(t.n_total + m, 0.0);
  for (int i = 0; i < m; ++i) cost1[t.n_total + i] = 1.0;
  bool any_artificial = false;
  for (int i = 0; i < m; ++i) any_artificial |= t.basis[i] >= t.n_total;
  LpSolution sol;
  if (any_artificial) {
    run.optimize(cost1);
    run.recompute_xb();
    double art_sum = 0;
    for (int i = 0; i < m; ++i)
      if (t.basis[i] >= t.n_total) art_sum += std::max(0.0, t.xb[i]);
    if (art_sum > 1e-7) {
      sol.status = LpStatus::Infeasible;
      sol.iterations = run.iterations;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    std::vector<double> w(m);
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] < t.n_total) continue;
      int found = -1;
      for (int j = 0; j < t.n_total && found < 0; ++j) {
        bool basic = false;
        for (int r = 0; r < m; ++r) basic |= t.basis[r] == j;
        if (basic) continue;
        t.column_times_binv(j, w);
        if (std::abs(w[i]) > 1e-7) found = j;
      }
      if (found >= 0) {
        t.column_times_binv(found, w);
        run.pivot(found, i, w);
        t.xb[i] = 0.0;
      }
      // else: redundant row; the artificial stays basic at zero and every
      // real column has a zero entry there, so it can never move again.
    }
  }

  // Phase 2.
  std::vector<double> cost2(t.n_total + m, 0.0);
  for (int j = 0; j < lp.num_vars; ++j)
    cost2[j] = j < static_cast<int>(lp.objective.size()) ? lp.objective[j] : 0.0;
  bool bounded = run.optimize(cost2);
  run.recompute_xb();
  if (!bounded) {
    sol.status = LpStatus::Unbounded;
    sol.iterations = run.iterations;
    return sol;
  }

  sol.status = LpStatus::Optimal;
  sol.x.assign(lp.num_vars, 0.0);
  for (int i = 0; i < m; ++i)
    if (t.basis[i] < lp.num_vars) sol.x[t.basis[i]] = t.xb[i];
  double obj = 0;
  for (int j = 0; j < lp.num_vars; ++j) obj += cost2[j] * sol.x[j];
  sol.objective = obj;
  std::vector<double> cb(m);
  for (int i = 0; i < m; ++i) cb[i] = cost2[t.basis[i]];
  std::vector<double> y = run.dual(cb);
  double dual_obj = 0;
  for (int i = 0; i < m; ++i) dual_obj += y[i] * t.b[i];
  sol.dual_objective = dual_obj;
  sol.iterations = run.iterations;

  // Violations measured against the original rows.
  double viol = 0;
  for (int j = 0; j < lp.num_vars; ++j) viol = std::max(viol, -sol.x[j]);
  for (const auto& r : lp.rows) {
    double ax = 0;
    for (const auto& [j, v] : r.coeffs) ax += v * sol.x[j];
    double d = ax - r.rhs;
    if (r.rel == Rel::Le) viol = std::max(viol, d);
    else if (r.rel == Rel::Ge) viol = std::max(viol, -d);
    else viol = std::max(viol, std::abs(d));
  }
  sol.max_violation = viol;
  if (viol > 1e-6)
    throw Error(Err::NumericalFailure, "solution violates constraints beyond tolerance");
  return sol;
}

CutResult solve_with_cuts(LinearProgram lp, const CutOracle& oracle, int max_rounds) {
  CutResult out;
  out.solution = solve(lp);
  for (int round = 0; round < max_rounds; ++round) {
    if (out.solution.status != LpStatus::Optimal) return out;
    auto cut = oracle(out.solution);
    if (!cut) return out;
    lp.add_row(std::move(*cut));
    out.solution = solve(lp);
    ++out.cuts_added;
  }
  if (out.solution.status == LpStatus::Optimal && oracle(out.solution))
    throw Error(Err::CutLimitReached, "cut oracle still violated after max rounds");
  return out;
}

}  // namespace lowfit
