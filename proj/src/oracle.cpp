#include "lowfit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lowfit {

namespace {

std::vector<Vec> cartesian_points(const Grid& grid, int k) {
  std::vector<Vec> pts;
  std::vector<int> idx(k, 0);
  for (;;) {
    Vec p(k);
    for (int c = 0; c < k; ++c) p[c] = grid.values[idx[c]];
    pts.push_back(std::move(p));
    int pos = k - 1;
    while (pos >= 0 && ++idx[pos] == grid.size()) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return pts;
}

void check_state_budget(double per_var, int vars, long long max_states) {
  double states = 1;
  for (int i = 0; i < vars; ++i) {
    states *= per_var;
    if (states > static_cast<double>(max_states))
      throw Error(Err::TooLarge, "enumeration exceeds the state budget");
  }
}

// Shared enumeration skeleton: cost(i, assignment) returns the added cost of
// assigning variable i given all variables < i are assigned.
struct Enumerator {
  int vars;
  int q;
  std::function<double(int, const std::vector<int>&)> added_cost;
  std::function<bool(int, const std::vector<int>&)> admissible;  // checked after assign

  std::vector<int> best_assign;
  double best = std::numeric_limits<double>::infinity();
  long long leaves = 0;

  void run() {
    std::vector<int> assign(vars, 0);
    std::vector<double> partial(vars + 1, 0.0);
    rec(0, assign, partial);
  }

  void rec(int i, std::vector<int>& assign, std::vector<double>& partial) {
    if (i == vars) {
      ++leaves;
      if (partial[vars] < best) {
        best = partial[vars];
        best_assign = assign;
      }
      return;
    }
    for (int a = 0; a < q; ++a) {
      assign[i] = a;
      double c = added_cost(i, assign);
      partial[i + 1] = partial[i] + c;
      if (partial[i + 1] > best) continue;  // all term costs are nonnegative
      if (admissible && !admissible(i, assign)) continue;
      rec(i + 1, assign, partial);
    }
  }
};

}  // namespace

DiscreteOpt brute_force_emv(const EmvInstance& inst, const Grid& grid, long long max_states) {
  std::vector<Vec> pts = cartesian_points(grid, inst.k);
  check_state_budget(static_cast<double>(pts.size()), inst.n, max_states);
  const double inv = 2.0 / (static_cast<double>(inst.n) * inst.n);
  Enumerator en;
  en.vars = inst.n;
  en.q = static_cast<int>(pts.size());
  en.added_cost = [&](int i, const std::vector<int>& a) {
    double c = 0;
    for (int j = 0; j < i; ++j) {
      double r = inst.d[i][j] - dist(pts[a[i]], pts[a[j]]);
      c += inv * r * r;
    }
    return c;
  };
  en.run();
  DiscreteOpt out;
  out.value = en.best;
  out.states = en.leaves;
  out.argmin.reserve(inst.n);
  for (int i = 0; i < inst.n; ++i) out.argmin.push_back(pts[en.best_assign[i]]);
  return out;
}

DiscreteOpt brute_force_wemv(const WeightedEmvInstance& inst, const Grid& grid,
                             long long max_states) {
  int n = inst.base.n;
  std::vector<Vec> pts = cartesian_points(grid, inst.base.k);
  check_state_budget(static_cast<double>(pts.size()), n, max_states);
  double wsum = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) wsum += inst.w[i][j];
  if (wsum <= 0) wsum = 1;
  Enumerator en;
  en.vars = n;
  en.q = static_cast<int>(pts.size());
  en.added_cost = [&](int i, const std::vector<int>& a) {
    double c = 0;
    for (int j = 0; j < i; ++j) {
      if (inst.w[i][j] == 0.0) continue;
      double r = inst.base.d[i][j] - dist(pts[a[i]], pts[a[j]]);
      c += 2.0 * inst.w[i][j] * r * r / wsum;
    }
    return c;
  };
  en.run();
  DiscreteOpt out;
  out.value = en.best;
  out.states = en.leaves;
  for (int i = 0; i < n; ++i) out.argmin.push_back(pts[en.best_assign[i]]);
  return out;
}

namespace {

DiscreteOpt lra_enumerate(const LraInstance& inst, const Grid& sigma, long long max_states,
                          const double* s_u, const double* s_v) {
  const int n = inst.n, m = inst.m, p = inst.p;
  const auto& vals = sigma.values;
  check_state_budget(static_cast<double>(vals.size()), n + m, max_states);
  std::vector<double> val_pow(vals.size());
  for (std::size_t a = 0; a < vals.size(); ++a) val_pow[a] = std::pow(vals[a], p);

  Enumerator en;
  en.vars = n + m;
  en.q = static_cast<int>(vals.size());
  // Variables 0..n-1 are u, n..n+m-1 are v; each v_j closes a column.
  en.added_cost = [&](int i, const std::vector<int>& a) {
    if (i < n) return 0.0;
    int j = i - n;
    double c = 0;
    for (int r = 0; r < n; ++r) c += std::pow(inst.a[r][j] - vals[a[r]] * vals[a[i]], p);
    return c;
  };
  if (s_u || s_v) {
    en.admissible = [&, s_u, s_v](int i, const std::vector<int>& a) {
      if (s_u && i == n - 1) {
        double nu = 0;
        for (int r = 0; r < n; ++r) nu += val_pow[a[r]];
        if (std::abs(nu - *s_u) > 1e-9) return false;
      }
      if (s_v && i == n + m - 1) {
        double nv = 0;
        for (int r = n; r < n + m; ++r) nv += val_pow[a[r]];
        if (std::abs(nv - *s_v) > 1e-9) return false;
      }
      return true;
    };
  }
  en.run();
  DiscreteOpt out;
  out.value = en.best;
  out.states = en.leaves;
  if (std::isfinite(en.best))
    for (int i = 0; i < n + m; ++i) out.argmin.push_back({vals[en.best_assign[i]]});
  return out;
}

}  // namespace

DiscreteOpt brute_force_lra(const LraInstance& inst, const Grid& sigma, long long max_states) {
  return lra_enumerate(inst, sigma, max_states, nullptr, nullptr);
}

DiscreteOpt filtered_brute_force_lra(const LraInstance& inst, const Grid& sigma, double s_u,
                                     double s_v, long long max_states) {
  return lra_enumerate(inst, sigma, max_states, &s_u, &s_v);
}

namespace {

// Minimize the objective along one coordinate: scan exact per-term candidate
// positions plus a coarse sweep, then golden-section polish around the best.
double line_minimize(const std::function<double(double)>& f, std::vector<double> candidates,
                     double lo, double hi) {
  for (int g = 0; g <= 32; ++g) candidates.push_back(lo + (hi - lo) * g / 32.0);
  double best_t = candidates[0], best_v = f(candidates[0]);
  for (double t : candidates) {
    double v = f(t);
    if (v < best_v) {
      best_v = v;
      best_t = t;
    }
  }
  double span = (hi - lo) / 32.0 + 1e-12;
  double a = best_t - span, b = best_t + span;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
  }
  double mid = 0.5 * (a + b);
  return f(mid) < best_v ? mid : best_t;
}

}  // namespace

Embedding local_search_emv(const EmvInstance& inst, int restarts, Rng& rng) {
  const int n = inst.n, k = inst.k;
  double spread = 2.0 * std::sqrt(std::max(inst.mean_sq, 1e-12));
  Embedding best;
  best.objective = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, restarts); ++r) {
    Rng rr = rng.derive(r);
    std::vector<Vec> x(n, Vec(k, 0.0));
    if (r > 0)
      for (auto& p : x)
        for (double& c : p) c = rr.uniform(-spread, spread);
    double obj = emv_objective(inst, x);
    for (int sweep = 0; sweep < 200; ++sweep) {
      double sweep_start = obj;
      for (int i = 0; i < n; ++i) {
        for (int c = 0; c < k; ++c) {
          auto f = [&](double t) {
            double save = x[i][c];
            x[i][c] = t;
            double v = emv_objective(inst, x);
            x[i][c] = save;
            return v;
          };
          std::vector<double> cands = {x[i][c]};
          double lo = x[i][c], hi = x[i][c];
          for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            lo = std::min(lo, x[j][c] - inst.d[i][j] - 1.0);
            hi = std::max(hi, x[j][c] + inst.d[i][j] + 1.0);
            double rest = 0;
            for (int cc = 0; cc < k; ++cc)
              if (cc != c) rest += (x[i][cc] - x[j][cc]) * (x[i][cc] - x[j][cc]);
            double gap = inst.d[i][j] * inst.d[i][j] - rest;
            if (gap >= 0) {
              cands.push_back(x[j][c] + std::sqrt(gap));
              cands.push_back(x[j][c] - std::sqrt(gap));
            } else {
              cands.push_back(x[j][c]);
            }
          }
          double t = line_minimize(f, std::move(cands), lo, hi);
          double ft = f(t);
          if (ft < obj) {
            x[i][c] = t;
            obj = ft;
          }
        }
      }
      if (sweep_start - obj <= 1e-10 * std::max(1.0, obj)) break;
    }
    obj = emv_objective(inst, x);
    if (obj < best.objective) {
      best.objective = obj;
      best.points = x;
    }
  }
  best.provenance = "{\"method\":\"local_search\",\"restarts\":" + std::to_string(restarts) +
                    ",\"rng_seed\":" + std::to_string(rng.seed()) + "}";
  return best;
}

}  // namespace lowfit
