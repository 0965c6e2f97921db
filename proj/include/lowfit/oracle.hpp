#pragma once

#include "lowfit/grid.hpp"
#include "lowfit/instance.hpp"

namespace lowfit {

struct DiscreteOpt {
  std::vector<Vec> argmin;  // for LRA: argmin[0..n-1] = u entries, rest = v
  double value = 0;
  long long states = 0;
};

inline constexpr long long kDefaultMaxStates = 10000000;

// Exact minimum of the EMV objective over (Sigma^k)^n by exhaustive
// enumeration with branch-and-bound pruning on the partial objective.
DiscreteOpt brute_force_emv(const EmvInstance& inst, const Grid& grid,
                            long long max_states = kDefaultMaxStates);

DiscreteOpt brute_force_wemv(const WeightedEmvInstance& inst, const Grid& grid,
                             long long max_states = kDefaultMaxStates);

DiscreteOpt brute_force_lra(const LraInstance& inst, const Grid& sigma,
                            long long max_states = kDefaultMaxStates);

// Same as brute_force_lra but restricted to assignments whose p-norms match
// (s_u, s_v) within 1e-9. Value is +inf when nothing matches.
DiscreteOpt filtered_brute_force_lra(const LraInstance& inst, const Grid& sigma, double s_u,
                                     double s_v, long long max_states = kDefaultMaxStates);

// Multi-restart coordinate descent with a scan + golden-section line search
// per coordinate. Continuous baseline; restart 0 starts from the origin.
Embedding local_search_emv(const EmvInstance& inst, int restarts, Rng& rng);

}  // namespace lowfit
