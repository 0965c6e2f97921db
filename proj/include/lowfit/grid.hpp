#pragma once

#include <string>
#include <vector>

#include "lowfit/common.hpp"

namespace lowfit {

// A finite one-dimensional alphabet of coordinate values.
struct Grid {
  enum class Kind { Geometric, Uniform };

  std::vector<double> values;  // sorted, strictly ascending
  Kind kind = Kind::Uniform;
  double epsilon = 0;  // resolution parameter (step for uniform grids)
  double scale = 1;    // multiplicative scale applied to geometric values

  int size() const { return static_cast<int>(values.size()); }
  bool contains(double v, double tol = 0.0) const;

  // Per-coordinate nearest grid value; exact midpoints break toward the
  // value of smaller magnitude.
  double snap_coord(double x) const;
  Vec snap(const Vec& point) const;
};

// Geometric alphabet: {0} union +-{eps*sqrt(1/k)*sqrt(mean_sq)*(1+eps)^t},
// t = 1..T with T = ceil(12*log_{1+eps}(k*delta/eps)). Mirrored about zero so
// that arbitrary signed coordinates can be snapped.
Grid build_emv_grid(double eps, int k, double delta, double mean_sq);

// Zero-anchored uniform grid covering [lo, hi]: multiples m*step with
// -ceil(-lo/step) <= m <= ceil(hi/step). Always contains 0 when lo <= 0 <= hi.
Grid build_uniform_grid(double lo, double hi, double step);

std::string grid_to_json(const Grid& g);

}  // namespace lowfit
