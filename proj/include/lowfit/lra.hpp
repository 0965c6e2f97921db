#pragma once

#include <optional>

#include "lowfit/grid.hpp"
#include "lowfit/instance.hpp"
#include "lowfit/rounding.hpp"

namespace lowfit {

struct LraParams {
  double eps = 0.5;
  int degree = 0;     // 0 means p + seed_size
  int seed_size = 1;  // conditioned v-indices
  int repeats = 10;
  int sigma_cap = 9;     // >0: coarsen Sigma to at most this many values
  int norm_sample = 16;  // random (s_u, s_v) cells; 0 means exhaustive S x S
  std::uint64_t rng_seed = 1;
  int parallelism = 1;
  std::optional<Grid> sigma_override;
};

struct LraResult {
  Vec u, v;
  double objective = 0;
  std::vector<RoundingReport> reports;
  double best_lp_value = 0;
  double best_su = 0, best_sv = 0;
  double q0_identity_gap = 0;  // max over solved LPs of |pE sum u^p v^p - su*sv|
  int cells_solved = 0;
  int cells_infeasible = 0;
  Grid sigma;
  Grid norm_grid;
  std::string provenance;
};

// Candidate p-norm targets: nonnegative values of the uniform
// (eps^p/n^3) * sqrt(|A|_p^p) grid over [0, 2 sqrt(|A|_p^p)], clipped at the
// magnitude bound 2^p * sqrt(|A|_p^p).
Grid build_norm_grid(const LraInstance& inst, double eps);

// Norm-target loop over (s_u, s_v): relaxation with per-monomial norm
// constraints, conditioning on v-variables, independent rounding, best cell.
LraResult solve_lra(const LraInstance& inst, const LraParams& params);

// Relaxation optimum of a single (s_u, s_v) cell; a lower bound on the
// discrete optimum among assignments with exactly those p-norms.
// Throws Infeasible when the cell admits no consistent family.
double lra_cell_lp_value(const LraInstance& inst, const Grid& sigma, int degree, double s_u,
                         double s_v);

struct LraBaseline {
  Vec u, v;
  double objective = 0;
  std::vector<double> residual_trace;  // after each half-sweep
};

// Alternating coordinate minimization; each scalar update is the root of an
// odd-degree derivative found by bisection + Newton. Restart 0 may be warm.
LraBaseline lra_alternating_baseline(const LraInstance& inst, int restarts, Rng& rng,
                                     const std::optional<std::pair<Vec, Vec>>& warm = {});

}  // namespace lowfit
