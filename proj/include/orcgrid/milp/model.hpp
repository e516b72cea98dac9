#pragma once

#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace orcgrid::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary };
enum class RowSense { LE, GE, EQ };

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct VarDef {
  std::string name;
  double lower = 0.0;
  double upper = kInf;
  VarKind kind = VarKind::Continuous;
};

struct LinConstraint {
  std::string name;
  std::vector<Term> terms;
  RowSense sense = RowSense::LE;
  double rhs = 0.0;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sparse minimization model. Constraint and objective terms reference
/// variables by position in `vars`.
struct MilpModel {
  std::string name = "model";
  std::vector<VarDef> vars;
  std::vector<LinConstraint> constraints;
  std::vector<Term> objective;

  int add_var(std::string var_name, double lower, double upper,
              VarKind kind = VarKind::Continuous);
  int add_binary(std::string var_name) {
    return add_var(std::move(var_name), 0.0, 1.0, VarKind::Binary);
  }
  int add_row(std::string row_name, std::vector<Term> terms, RowSense sense,
              double rhs);
  /// Adds `cost` to the objective coefficient of `var`.
  void add_cost(int var, double cost);

  [[nodiscard]] int num_vars() const { return static_cast<int>(vars.size()); }
  [[nodiscard]] int num_rows() const {
    return static_cast<int>(constraints.size());
  }
  [[nodiscard]] std::vector<double> dense_objective() const;
  [[nodiscard]] std::vector<int> binary_vars() const;
};

/// Throws ModelError describing the first broken invariant.
void check_model(const MilpModel& model);

[[nodiscard]] double evaluate_objective(const MilpModel& model,
                                        std::span<const double> values);

/// Signed violation of a row: positive means the row is violated by that
/// amount, zero or negative means satisfied.
[[nodiscard]] double row_violation(const LinConstraint& row,
                                   std::span<const double> values);

struct FeasibilityReport {
  double max_row_violation = 0.0;
  int worst_row = -1;
  double max_bound_violation = 0.0;
  int worst_var = -1;
  double max_integrality_violation = 0.0;
};

/// Residual checker that only reads the model and a value vector.
[[nodiscard]] FeasibilityReport check_feasibility(const MilpModel& model,
                                                  std::span<const double> values);

}  // namespace orcgrid::milp
