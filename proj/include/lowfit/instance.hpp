#pragma once

#include <string>
#include <vector>

#include "lowfit/common.hpp"

namespace lowfit {

using Matrix = std::vector<std::vector<double>>;

// Pairwise dissimilarity instance, normalized so the smallest nonzero entry
// is 1. Immutable after construction; safe to share across workers.
struct EmvInstance {
  int n = 0;
  int k = 1;
  Matrix d;             // symmetric, zero diagonal, nonnegative
  double mean_sq = 0;   // average of d_ij^2 over all n^2 ordered pairs
  double delta = 1;     // max nonzero / min nonzero (1 for all-zero input)
  double scale = 1;     // factor applied to the input so min nonzero = 1
};

struct WeightedEmvInstance {
  EmvInstance base;
  Matrix w;                    // symmetric, entries in [0,1], zero diagonal
  double delta_reg = 0;        // row sums are delta_reg * n
  double row_sum_target = 0;   // delta_reg * n
  double weighted_mean_sq = 0; // E_{ij ~ w} d_ij^2
};

struct LraInstance {
  Matrix a;
  int n = 0, m = 0;
  int p = 2;          // even, >= 2
  double norm_p = 0;  // sum_ij A_ij^p
};

struct Embedding {
  std::vector<Vec> points;  // n points in R^k
  double objective = 0;
  std::string provenance;   // JSON blob: anchor, seed set, rng seed, ...
};

EmvInstance load_emv(const Matrix& matrix, int k);
WeightedEmvInstance load_wemv(const Matrix& d, const Matrix& w, int k);
LraInstance load_lra(const Matrix& a, int p);

double emv_objective(const EmvInstance& inst, const std::vector<Vec>& x);
double weighted_objective(const WeightedEmvInstance& inst, const std::vector<Vec>& x);
double lra_objective(const LraInstance& inst, const Vec& u, const Vec& v);

// Maps an embedding of the normalized instance back to the input scale.
std::vector<Vec> denormalize(const EmvInstance& inst, const std::vector<Vec>& x);

struct PlantedEmv {
  EmvInstance inst;
  std::vector<Vec> planted;  // ground-truth points, normalized scale
};

// d_ij = ||y_i - y_j|| + noise for integer-valued y (so the noiseless
// instance is exactly representable on a unit lattice).
PlantedEmv gen_planted(int n, int k, double noise, Rng& rng);

// Two disjoint cliques with internally consistent distances; cross pairs
// carry zero weight. The shift between cluster layouts is 2^b.
WeightedEmvInstance gen_shifted_clusters(int n, int b, Rng& rng);

// i.i.d. dissimilarities in [1, delta].
EmvInstance gen_random_nonmetric(int n, double delta, Rng& rng);

}  // namespace lowfit
