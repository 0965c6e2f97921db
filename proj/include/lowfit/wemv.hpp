#pragma once

#include <optional>

#include "lowfit/grid.hpp"
#include "lowfit/instance.hpp"
#include "lowfit/rounding.hpp"

namespace lowfit {

struct WemvParams {
  double eps = 0.25;
  int degree = 4;
  SeedStrategy strategy = SeedStrategy::sampled(1, 1);
  int repeats = 25;
  std::uint64_t rng_seed = 1;
  int parallelism = 1;
  std::optional<Grid> grid_override;
  bool clip_grid = true;     // clip the [-n*delta, n*delta] range
  double clip_c = 32.0;      // clipped half-range: clip_c * sqrt(wms) / eps
  int grid_cap = 0;          // >0: coarsen the step so |Sigma| <= cap
  int psd_cut_rounds = 64;
};

struct WemvResult {
  Embedding embedding;
  std::vector<RoundingReport> reports;
  double lp_value = 0;
  int cuts_added = 0;
  Grid grid;
};

// Returns delta such that every row of w sums to delta * n (within 1e-9),
// or throws NotRegular naming the offending rows.
double check_regularity(const Matrix& w);

// Uniform-grid relaxation of the weighted objective; no anchoring, the
// conditioning set does that work. With psd_cuts, eigenvector cuts
// v' M v >= 0 on the joint second-moment matrix are added until it is
// positive semidefinite up to tolerance.
WemvResult solve_wemv(const WeightedEmvInstance& inst, const WemvParams& params, bool psd_cuts);

// phi_G(A) = E(A, V \ A) / vol(A), with vol(A) the total weighted degree.
double conductance(const Matrix& w, const std::vector<int>& a_set);

// rho_G(k): exhaustive minimum over ordered tuples of disjoint nonempty
// vertex sets of the maximum conductance. Brute force, n <= 10.
double multiway_conductance_bruteforce(const Matrix& w, int kparts);

}  // namespace lowfit
