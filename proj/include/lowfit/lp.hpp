#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lowfit/common.hpp"

namespace lowfit {

enum class Rel { Le, Eq, Ge };

struct LpRow {
  std::vector<std::pair<int, double>> coeffs;  // sorted by variable index
  Rel rel = Rel::Eq;
  double rhs = 0;
  std::string name;
};

// Minimization LP over nonnegative variables.
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<LpRow> rows;

  int add_row(LpRow row);
  void dump(std::ostream& os) const;  // one row per line, for external checks
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;
  double objective = 0;
  double dual_objective = 0;  // equals objective at optimality up to roundoff
  double max_violation = 0;
  long iterations = 0;
};

inline constexpr double kFeasTol = 1e-9;
inline constexpr double kOptTol = 1e-8;

// Deterministic two-phase revised simplex. Dantzig pricing with a Bland
// fallback after a degenerate stall, so the pivot sequence is a pure
// function of the input. Throws NumericalFailure past the iteration cap.
LpSolution solve(const LinearProgram& lp);

using CutOracle = std::function<std::optional<LpRow>(const LpSolution&)>;

struct CutResult {
  LpSolution solution;
  int cuts_added = 0;
};

// Re-solves after each violated inequality returned by the oracle. Throws
// CutLimitReached if the oracle still produces cuts after max_rounds.
CutResult solve_with_cuts(LinearProgram lp, const CutOracle& oracle, int max_rounds);

}  // namespace lowfit
