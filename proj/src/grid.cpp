#include "lowfit/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lowfit {

namespace {

// ceil with a small backoff so that values a hair above an integer (from
// float noise in the argument) do not get bumped up a whole step.
long long safe_ceil(double x) { return static_cast<long long>(std::ceil(x - 1e-9)); }

}  // namespace

bool Grid::contains(double v, double tol) const {
  for (double g : values)
    if (std::abs(g - v) <= tol) return true;
  return false;
}

double Grid::snap_coord(double x) const {
  auto it = std::lower_bound(values.begin(), values.end(), x);
  double best = 0;
  bool have = false;
  auto consider = [&](double cand) {
    if (!have) {
      best = cand;
      have = true;
      return;
    }
    double dc = std::abs(cand - x), db = std::abs(best - x);
    if (dc < db || (dc == db && std::abs(cand) < std::abs(best))) best = cand;
  };
  if (it != values.end()) consider(*it);
  if (it != values.begin()) consider(*(it - 1));
  return best;
}

Vec Grid::snap(const Vec& point) const {
  Vec out(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) out[i] = snap_coord(point[i]);
  return out;
}

Grid build_emv_grid(double eps, int k, double delta, double mean_sq) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(Err::BadEpsilon, "need 0 < eps < 1");
  if (delta < 1.0 || mean_sq < 0.0 || k < 1) throw Error(Err::BadRange, "bad grid parameters");
  Grid g;
  g.kind = Grid::Kind::Geometric;
  g.epsilon = eps;
  g.scale = std::sqrt(mean_sq);
  if (mean_sq == 0.0) {
    g.values = {0.0};
    return g;
  }
  long long T = safe_ceil(12.0 * std::log(k * delta / eps) / std::log1p(eps));
  double base = eps * std::sqrt(1.0 / k) * g.scale;
  std::vector<double> pos(T);
  double v = base;
  for (long long t = 0; t < T; ++t) {
    v *= (1.0 + eps);
    pos[t] = v;
  }
  g.values.reserve(2 * T + 1);
  for (long long t = T - 1; t >= 0; --t) g.values.push_back(-pos[t]);
  g.values.push_back(0.0);
  for (long long t = 0; t < T; ++t) g.values.push_back(pos[t]);
  return g;
}

Grid build_uniform_grid(double lo, double hi, double step) {
  if (lo > hi) throw Error(Err::BadRange, "lo > hi");
  Grid g;
  g.kind = Grid::Kind::Uniform;
  g.epsilon = step;
  if (lo == hi) {
    g.values = {lo};
    return g;
  }
  if (!(step > 0.0)) throw Error(Err::BadRange, "step must be positive");
  if ((hi - lo) / step > 5e7) throw Error(Err::TooLarge, "uniform grid too large");
  if (lo <= 0.0 && hi >= 0.0) {
    long long m_lo = -safe_ceil(-lo / step);
    long long m_hi = safe_ceil(hi / step);
    g.values.reserve(m_hi - m_lo + 1);
    for (long long m = m_lo; m <= m_hi; ++m) g.values.push_back(m * step);
  } else {
    for (double v = lo; v <= hi + 1e-9 * step; v += step) g.values.push_back(v);
  }
  return g;
}

std::string grid_to_json(const Grid& g) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (int i = 0; i < g.size(); ++i) {
    if (i) os << ",";
    os << g.values[i];
  }
  os << "]";
  return os.str();
}

}  // namespace lowfit
