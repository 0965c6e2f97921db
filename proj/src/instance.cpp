#include "lowfit/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lowfit {

namespace {

void check_square_symmetric(const Matrix& m) {
  std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw Error(Err::DimensionMismatch, "matrix is not square");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::isfinite(m[i][j])) throw Error(Err::NonFinite, "matrix entry not finite");
      if (m[i][j] != m[j][i]) throw Error(Err::AsymmetricInput, "matrix is not symmetric");
    }
  }
}

double recompute_mean_sq(const Matrix& d) {
  std::size_t n = d.size();
  double s = 0;
  for (const auto& row : d)
    for (double v : row) s += v * v;
  return s / (static_cast<double>(n) * static_cast<double>(n));
}

}  // namespace

EmvInstance load_emv(const Matrix& matrix, int k) {
  if (matrix.empty() || k < 1) throw Error(Err::BadInput, "need n >= 1 and k >= 1");
  check_square_symmetric(matrix);
  std::size_t n = matrix.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i][i] != 0.0) throw Error(Err::NonzeroDiagonal, "diagonal must be zero");
    for (std::size_t j = 0; j < n; ++j)
      if (matrix[i][j] < 0.0) throw Error(Err::NegativeEntry, "dissimilarities must be nonnegative");
  }

  EmvInstance inst;
  inst.n = static_cast<int>(n);
  inst.k = k;
  double min_nz = std::numeric_limits<double>::infinity();
  double max_nz = 0;
  for (const auto& row : matrix)
    for (double v : row)
      if (v > 0) {
        min_nz = std::min(min_nz, v);
        max_nz = std::max(max_nz, v);
      }
  if (std::isfinite(min_nz)) {
    inst.scale = 1.0 / min_nz;
    inst.delta = max_nz / min_nz;
  } else {
    inst.scale = 1.0;  // all-zero input
    inst.delta = 1.0;
  }
  inst.d = matrix;
  if (inst.scale != 1.0)
    for (auto& row : inst.d)
      for (double& v : row) v *= inst.scale;
  inst.mean_sq = recompute_mean_sq(inst.d);
  return inst;
}

WeightedEmvInstance load_wemv(const Matrix& d, const Matrix& w, int k) {
  WeightedEmvInstance inst;
  inst.base = load_emv(d, k);
  check_square_symmetric(w);
  if (w.size() != d.size()) throw Error(Err::DimensionMismatch, "w and d sizes differ");
  int n = inst.base.n;
  for (int i = 0; i < n; ++i) {
    if (w[i][i] != 0.0) throw Error(Err::NonzeroDiagonal, "weight diagonal must be zero");
    for (int j = 0; j < n; ++j)
      if (w[i][j] < 0.0 || w[i][j] > 1.0) throw Error(Err::BadInput, "weights must lie in [0,1]");
  }
  double first = 0;
  for (int i = 0; i < n; ++i) {
    double rs = 0;
    for (int j = 0; j < n; ++j) rs += w[i][j];
    if (i == 0) first = rs;
    if (std::abs(rs - first) > 1e-9)
      throw Error(Err::NotRegular, "row " + std::to_string(i) + " sum deviates from row 0");
  }
  inst.w = w;
  inst.row_sum_target = first;
  inst.delta_reg = first / n;
  double num = 0, den = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      num += w[i][j] * inst.base.d[i][j] * inst.base.d[i][j];
      den += w[i][j];
    }
  inst.weighted_mean_sq = den > 0 ? num / den : 0.0;
  return inst;
}

LraInstance load_lra(const Matrix& a, int p) {
  if (a.empty() || a[0].empty()) throw Error(Err::BadInput, "empty matrix");
  if (p < 2 || p % 2 != 0) throw Error(Err::OddP, "p must be an even integer >= 2");
  LraInstance inst;
  inst.n = static_cast<int>(a.size());
  inst.m = static_cast<int>(a[0].size());
  for (const auto& row : a) {
    if (static_cast<int>(row.size()) != inst.m)
      throw Error(Err::DimensionMismatch, "ragged matrix");
    for (double v : row)
      if (!std::isfinite(v)) throw Error(Err::NonFinite, "matrix entry not finite");
  }
  inst.a = a;
  inst.p = p;
  double s = 0;
  for (const auto& row : a)
    for (double v : row) s += std::pow(v, p);
  inst.norm_p = s;
  return inst;
}

double emv_objective(const EmvInstance& inst, const std::vector<Vec>& x) {
  if (static_cast<int>(x.size()) != inst.n) throw Error(Err::DimensionMismatch, "wrong point count");
  for (const auto& p : x)
    if (static_cast<int>(p.size()) != inst.k) throw Error(Err::DimensionMismatch, "wrong dimension");
  double s = 0;
  for (int i = 0; i < inst.n; ++i)
    for (int j = i + 1; j < inst.n; ++j) {
      double r = inst.d[i][j] - dist(x[i], x[j]);
      s += 2.0 * r * r;
    }
  return s / (static_cast<double>(inst.n) * inst.n);
}

double weighted_objective(const WeightedEmvInstance& inst, const std::vector<Vec>& x) {
  int n = inst.base.n;
  if (static_cast<int>(x.size()) != n) throw Error(Err::DimensionMismatch, "wrong point count");
  double num = 0, den = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (inst.w[i][j] == 0.0) {
        continue;
      }
      double r = inst.base.d[i][j] - dist(x[i], x[j]);
      num += inst.w[i][j] * r * r;
      den += inst.w[i][j];
    }
  return den > 0 ? num / den : 0.0;
}

double lra_objective(const LraInstance& inst, const Vec& u, const Vec& v) {
  if (static_cast<int>(u.size()) != inst.n || static_cast<int>(v.size()) != inst.m)
    throw Error(Err::DimensionMismatch, "factor length mismatch");
  double s = 0;
  for (int i = 0; i < inst.n; ++i)
    for (int j = 0; j < inst.m; ++j) {
      double r = inst.a[i][j] - u[i] * v[j];
      s += std::pow(r, inst.p);
    }
  return s;
}

std::vector<Vec> denormalize(const EmvInstance& inst, const std::vector<Vec>& x) {
  std::vector<Vec> out = x;
  for (auto& p : out)
    for (double& c : p) c /= inst.scale;
  return out;
}

PlantedEmv gen_planted(int n, int k, double noise, Rng& rng) {
  if (n < 2) throw Error(Err::BadInput, "need n >= 2");
  // Integer coordinates with an adjacent pair, so min nonzero distance is 1
  // for k = 1 and normalization is exact.
  std::vector<Vec> y(n, Vec(k, 0.0));
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < k; ++c) y[i][c] = rng.uniform_int(3 * n);
  y[1] = y[0];
  y[1][0] += 1.0;
  Matrix d(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = dist(y[i], y[j]);
      if (noise > 0) v = std::max(0.0, v + noise * rng.uniform(-1.0, 1.0));
      d[i][j] = d[j][i] = v;
    }
  PlantedEmv out;
  out.inst = load_emv(d, k);
  out.planted.resize(n);
  for (int i = 0; i < n; ++i) {
    out.planted[i] = y[i];
    for (double& c : out.planted[i]) c *= out.inst.scale;
  }
  return out;
}

WeightedEmvInstance gen_shifted_clusters(int n, int b, Rng& rng) {
  if (n < 4 || n % 2 != 0) throw Error(Err::BadInput, "need even n >= 4");
  int h = n / 2;
  double shift = std::ldexp(1.0, b);
  // One-dimensional layout: cluster 0 around 0, cluster 1 around the shift.
  Vec pos(n);
  for (int i = 0; i < h; ++i) pos[i] = i + rng.uniform_int(2);
  for (int i = h; i < n; ++i) pos[i] = shift + (i - h) + rng.uniform_int(2);
  Matrix d(n, std::vector<double>(n, 0.0));
  Matrix w(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      bool same = (i < h) == (j < h);
      d[i][j] = d[j][i] = std::max(1.0, std::abs(pos[i] - pos[j]));
      if (same) w[i][j] = w[j][i] = 1.0;
    }
  return load_wemv(d, w, 1);
}

EmvInstance gen_random_nonmetric(int n, double delta, Rng& rng) {
  if (n < 2 || delta < 1.0) throw Error(Err::BadInput, "need n >= 2 and delta >= 1");
  Matrix d(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d[i][j] = d[j][i] = rng.uniform(1.0, delta);
  return load_emv(d, 1);
}

}  // namespace lowfit
