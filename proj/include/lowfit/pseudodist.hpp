#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lowfit/grid.hpp"
#include "lowfit/lp.hpp"

namespace lowfit {

// Variables x_1..x_n, each ranging over its own finite list of points in R^dim.
struct VariableSpace {
  int n = 0;
  int dim = 1;
  std::vector<std::vector<Vec>> alphabet;  // alphabet[i] = candidate points of x_i
  int degree = 2;

  int q(int i) const { return static_cast<int>(alphabet[i].size()); }
  static VariableSpace uniform(int n, int dim, const std::vector<Vec>& points, int degree);
  // Cartesian power grid^dim as the per-variable alphabet.
  static VariableSpace from_grid(int n, int dim, const Grid& grid, int degree);
};

using Support = std::vector<int>;  // sorted variable indices

// Function of at most `degree` variables; eval receives the points assigned
// to `support`, in support order.
struct Junta {
  Support support;
  std::function<double(const std::vector<Vec>&)> eval;
};

// Family of locally consistent distributions over joint assignments.
// Immutable; condition() returns a new object.
class PseudoDistribution {
 public:
  struct Fixed {
    int var;
    int value_index;
    Vec value;
  };

  std::shared_ptr<const VariableSpace> space;
  std::map<Support, std::vector<double>> tables;  // row-major over value indices
  std::vector<Fixed> conditioned_on;
  int degree = 0;

  bool has_table(const Support& s) const;
  // Exact or marginalized-from-a-stored-superset table; throws MissingTable.
  std::vector<double> table(const Support& s) const;

  double pe(const Junta& f) const;
  PseudoDistribution condition(int var, int value_index) const;
  std::vector<int> sample_local(const Support& s, Rng& rng) const;

  // E_i tr of the per-variable pseudo-covariance (conditioned vars count 0).
  double variance_potential() const;
  // E_i H(x~_i) in nats, where outcomes beyond C standard deviations of the
  // mean collapse to a single symbol.
  double entropy_potential(double c) const;

  double avg_pairwise_tv(const std::function<double(int, int)>& pair_weight) const;

  // Largest discrepancy between marginals of overlapping stored tables.
  double max_consistency_gap() const;

  bool is_conditioned(int var) const;
  std::string dump_json() const;

  // Exact family of all marginals of a full joint distribution (desk scale).
  static PseudoDistribution from_full_joint(std::shared_ptr<const VariableSpace> space,
                                            const std::vector<double>& joint, int degree);
};

// Var(u) - E_v Var(u|v) >= Cov^2(u,v) / (4 Var(v)) on a finite 2-variable
// joint (row-major over uvals x vvals). Vacuously true when Var(v) ~ 0.
bool check_var_reduction(const std::vector<double>& joint, const Vec& uvals, const Vec& vvals);

struct PeTerm {
  Junta junta;
  double weight = 1.0;
};

struct PeConstraint {
  std::vector<PeTerm> terms;
  Rel rel = Rel::Eq;
  double rhs = 0;
  std::string name;
};

struct Fixing {
  int var;
  Vec value;
};

struct SaRelaxation {
  LinearProgram lp;
  std::shared_ptr<const VariableSpace> space;  // alphabets restricted by fixings
  std::vector<Support> supports;
  std::map<Support, int> offsets;

  PseudoDistribution decode(const LpSolution& sol) const;
};

// Sherali-Adams style LP over local tables. Stored supports: all singletons,
// all pairs, junta supports, and the conditioning closure of each seed set
// (prefix tuples extended by one or, degree permitting, two free variables),
// closed downward. Local consistency is enforced by marginalization rows
// between every stored table and its stored facets.
SaRelaxation build_sa_relaxation(const VariableSpace& space,
                                 const std::vector<PeTerm>& objective,
                                 const std::vector<PeConstraint>& constraints,
                                 const std::vector<Fixing>& fixings,
                                 const std::vector<Support>& seed_sets);

}  // namespace lowfit
