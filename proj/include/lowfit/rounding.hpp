#pragma once

#include <vector>

#include "lowfit/instance.hpp"
#include "lowfit/pseudodist.hpp"

namespace lowfit {

struct SeedStrategy {
  enum class Kind { Exhaustive, Sampled, GreedyPotential };
  Kind kind = Kind::Sampled;
  int size = 0;           // Exhaustive / GreedyPotential
  int size_weighted = 1;  // Sampled: |S1|, drawn proportional to row weights
  int size_uniform = 0;   // Sampled: |S2|, drawn uniformly
  double trunc_c = 4.0;   // truncation constant for the greedy entropy score

  static SeedStrategy exhaustive(int size) { return {Kind::Exhaustive, size, 0, 0, 4.0}; }
  static SeedStrategy sampled(int weighted, int uniform) {
    return {Kind::Sampled, 0, weighted, uniform, 4.0};
  }
  static SeedStrategy greedy(int size, double c) { return {Kind::GreedyPotential, size, 0, 0, c}; }

  int total_size() const {
    return kind == Kind::Sampled ? size_weighted + size_uniform : size;
  }
};

struct RoundingReport {
  int anchor = -1;
  std::vector<int> seed;
  std::vector<Vec> seed_values;
  double lp_value = 0;
  double objective = 0;
  int repetition = 0;
  std::uint64_t rng_seed = 0;
  double wall_ms = 0;
};

// Candidate conditioning sets over `pool`. Exhaustive enumerates every
// subset of the requested size; Sampled draws S1 with index probability
// proportional to row_weights plus a uniform S2, disjoint by rejection;
// GreedyPotential scores each index by the expected decrease of
// lambda1 * variance_potential + lambda2 * entropy_potential under
// conditioning (requires mu).
std::vector<Support> select_seed_sets(const SeedStrategy& strategy,
                                      const std::vector<double>& row_weights,
                                      const std::vector<int>& pool,
                                      const PseudoDistribution* mu, double lambda1,
                                      double lambda2, Rng& rng);

// EMV flavor: S1 weights are E_j d_ij^2, lambda1 = 1/mean_sq, lambda2 = 1/ln q.
std::vector<Support> select_seed(const SeedStrategy& strategy, const EmvInstance& inst,
                                 const PseudoDistribution* mu, Rng& rng);

// One draw per variable from its own marginal; conditioned variables keep
// their recorded values. Returns value indices per variable.
std::vector<int> round_independent(const PseudoDistribution& mu, Rng& rng);

std::vector<Vec> points_from_assignment(const PseudoDistribution& mu,
                                        const std::vector<int>& assignment);

struct RoundOutcome {
  std::vector<Vec> best_points;
  RoundingReport best;
  std::vector<RoundingReport> all;
};

// Algorithm core: per repetition draw seed values jointly, condition
// sequentially, round independently, evaluate; keep the minimum.
RoundOutcome condition_and_round(const PseudoDistribution& mu, const Support& seed,
                                 const std::function<double(const std::vector<Vec>&)>& objective,
                                 int repeats, Rng& rng);

}  // namespace lowfit
