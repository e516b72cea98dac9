#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "orcgrid/milp/model.hpp"

namespace orcgrid::milp {

enum class SolveStatus { Optimal, Infeasible, Unbounded, GapLimit };

[[nodiscard]] std::string_view to_string(SolveStatus status);

struct SolveStats {
  long lp_iterations = 0;
  long nodes = 0;
  double wall_seconds = 0.0;
};

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  /// One value per model variable; empty when no feasible point is known.
  std::vector<double> values;
  double objective = kInf;
  /// Best proven lower bound (minimization).
  double bound = -kInf;
  double gap = kInf;
  SolveStats stats;
  /// Improving direction over the structural variables when Unbounded.
  std::vector<double> ray;
  /// Names of a row subset that is infeasible on its own (plus variable
  /// bounds), minimal under row deletion.
  std::vector<std::string> conflict_rows;

  [[nodiscard]] bool has_incumbent() const { return !values.empty(); }
};

/// Raised when the simplex cannot find an acceptable pivot even after
/// falling back to Bland's rule.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LpOptions {
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
  double pivot_tol = 1e-11;
  int refactor_interval = 100;
  long max_iterations = 0;  // 0: derived from model size
};

struct MilpLimits {
  long max_nodes = 1'000'000;
  double rel_gap = 1e-6;
  double time_seconds = kInf;
};

inline constexpr double kFeasibilityTol = 1e-7;
inline constexpr double kIntegralityTol = 1e-6;

/// Solves the continuous relaxation of `model` (integrality dropped).
[[nodiscard]] Solution solve_lp(const MilpModel& model,
                                const LpOptions& options = {});

/// Branch-and-bound over the binary variables of `model`.
[[nodiscard]] Solution solve_milp(const MilpModel& model,
                                  const MilpLimits& limits = {},
                                  const LpOptions& options = {});

}  // namespace orcgrid::milp
