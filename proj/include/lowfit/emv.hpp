#pragma once

#include <optional>

#include "lowfit/grid.hpp"
#include "lowfit/instance.hpp"
#include "lowfit/rounding.hpp"

namespace lowfit {

struct AnchorPolicy {
  enum class Kind { All, Sample, Fixed };
  Kind kind = Kind::Sample;
  int count = 4;
  std::vector<int> fixed;

  static AnchorPolicy all() { return {Kind::All, 0, {}}; }
  static AnchorPolicy sample(int c) { return {Kind::Sample, c, {}}; }
  static AnchorPolicy fixed_list(std::vector<int> f) { return {Kind::Fixed, 0, std::move(f)}; }
};

struct EmvParams {
  double eps = 0.25;    // additive error target
  double eps_grid = 0;  // grid resolution; 0 means reuse eps
  int degree = 3;
  SeedStrategy strategy = SeedStrategy::sampled(1, 0);
  AnchorPolicy anchors = AnchorPolicy::sample(4);
  int repeats = 25;
  std::uint64_t rng_seed = 1;
  int parallelism = 1;
  std::optional<Grid> grid_override;  // desk-scale alphabets for tests/benches
  double ball_slack = 1e-6;           // relative slack on the 6*mean_sq ball
};

struct EmvResult {
  Embedding embedding;
  std::vector<RoundingReport> reports;
  double best_lp_value = 0;  // LP value of the winning anchor
  double min_anchor_lp = 0;  // smallest LP value over feasible anchors
  Grid grid;
  std::vector<int> anchors_tried;
  int anchors_infeasible = 0;
};

std::vector<PeTerm> emv_objective_terms(const EmvInstance& inst);

// Anchor loop: fix x_a = 0, constrain E_i pE|x_i|^2 <= 6 E d^2, solve the
// relaxation, condition on a seed set and round independently, best-of-R.
EmvResult solve_emv(const EmvInstance& inst, const EmvParams& params);

// Anchored relaxation optimum; a lower bound on the anchored discrete
// optimum. Throws Infeasible.
double lp_lower_bound(const EmvInstance& inst, int anchor, const EmvParams& params);

}  // namespace lowfit
