#include "orcgrid/milp/model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <fmt/format.h>

namespace orcgrid::milp {

int MilpModel::add_var(std::string var_name, double lower, double upper,
                       VarKind kind) {
  vars.push_back(VarDef{std::move(var_name), lower, upper, kind});
  return num_vars() - 1;
}

int MilpModel::add_row(std::string row_name, std::vector<Term> terms,
                       RowSense sense, double rhs) {
  constraints.push_back(
      LinConstraint{std::move(row_name), std::move(terms), sense, rhs});
  return num_rows() - 1;
}

void MilpModel::add_cost(int var, double cost) {
  if (cost == 0.0) return;
  for (auto& t : objective) {
    if (t.var == var) {
      t.coef += cost;
      return;
    }
  }
  objective.push_back(Term{var, cost});
}

std::vector<double> MilpModel::dense_objective() const {
  std::vector<double> c(vars.size(), 0.0);
  for (const auto& t : objective) c[t.var] += t.coef;
  return c;
}

std::vector<int> MilpModel::binary_vars() const {
  std::vector<int> out;
  for (int j = 0; j < num_vars(); ++j)
    if (vars[j].kind == VarKind::Binary) out.push_back(j);
  return out;
}

namespace {

void check_terms(const std::vector<Term>& terms, int n,
                 const std::string& where) {
  std::unordered_set<int> seen;
  for (const auto& t : terms) {
    if (t.var < 0 || t.var >= n)
      throw ModelError(fmt::format("{}: variable index {} out of range", where,
                                   t.var));
    if (!std::isfinite(t.coef))
      throw ModelError(fmt::format("{}: non-finite coefficient", where));
    if (!seen.insert(t.var).second)
      throw ModelError(
          fmt::format("{}: duplicate variable index {}", where, t.var));
  }
}

}  // namespace

void check_model(const MilpModel& model) {
  const int n = model.num_vars();
  if (n == 0) throw ModelError("model has no variables");
  for (const auto& v : model.vars) {
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper)
      throw ModelError(fmt::format("variable {}: lower > upper", v.name));
    if (v.lower == kInf || v.upper == -kInf)
      throw ModelError(fmt::format("variable {}: empty bound range", v.name));
    if (v.kind == VarKind::Binary && (v.lower < 0.0 || v.upper > 1.0))
      throw ModelError(
          fmt::format("binary variable {}: bounds outside [0,1]", v.name));
  }
  for (const auto& row : model.constraints) {
    check_terms(row.terms, n, "row " + row.name);
    if (!std::isfinite(row.rhs))
      throw ModelError(fmt::format("row {}: non-finite rhs", row.name));
  }
  check_terms(model.objective, n, "objective");
}

double evaluate_objective(const MilpModel& model,
                          std::span<const double> values) {
  double obj = 0.0;
  for (const auto& t : model.objective) obj += t.coef * values[t.var];
  return obj;
}

double row_violation(const LinConstraint& row, std::span<const double> values) {
  double activity = 0.0;
  for (const auto& t : row.terms) activity += t.coef * values[t.var];
  switch (row.sense) {
    case RowSense::LE:
      return activity - row.rhs;
    case RowSense::GE:
      return row.rhs - activity;
    case RowSense::EQ:
      return std::abs(activity - row.rhs);
  }
  return 0.0;
}

FeasibilityReport check_feasibility(const MilpModel& model,
                                    std::span<const double> values) {
  FeasibilityReport rep;
  for (int i = 0; i < model.num_rows(); ++i) {
    const double v = row_violation(model.constraints[i], values);
    if (v > rep.max_row_violation) {
      rep.max_row_violation = v;
      rep.worst_row = i;
    }
  }
  for (int j = 0; j < model.num_vars(); ++j) {
    const auto& def = model.vars[j];
    const double v = std::max(def.lower - values[j], values[j] - def.upper);
    if (v > rep.max_bound_violation) {
      rep.max_bound_violation = v;
      rep.worst_var = j;
    }
    if (def.kind == VarKind::Binary) {
      rep.max_integrality_violation =
          std::max(rep.max_integrality_violation,
                   std::abs(values[j] - std::round(values[j])));
    }
  }
  return rep;
}

}  // namespace orcgrid::milp
