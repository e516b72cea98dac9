#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "orcgrid/domain.hpp"
#include "orcgrid/milp/model.hpp"
#include "orcgrid/milp/solution.hpp"

namespace orcgrid::sorc {

enum class DegradationMode {
  /// Wear shrinks the usable capacity from b_max downward.
  RemainingCapacity,
  /// Capacity bounded by the degradation factor: cap <= d * b_max.
  LiteralFactor,
};

struct BuildOptions {
  DegradationMode degradation = DegradationMode::RemainingCapacity;
};

/// Column indices into the built model. Vectors hold entry t-1 for step t;
/// soc0 and cap0 are the fixed boundary columns at t = 0 (cap0 is -1 in
/// LiteralFactor mode).
struct SorcVariableMap {
  std::vector<int> x, z, g, q_in, q_solar, m_orc, area;
  std::vector<int> soc, charge, discharge, y_in, y_out;
  std::vector<int> cap, wear, e_in, e_out;
  int soc0 = -1;
  int cap0 = -1;
};

struct SorcModel {
  milp::MilpModel model;
  SorcVariableMap map;
  DegradationMode degradation = DegradationMode::RemainingCapacity;
};

/// Power quantities are step averages in kW; soc, cap_available, grid_import
/// and grid_export are kWh.
struct SorcStep {
  double production_kw = 0.0;
  double pump_kw = 0.0;
  double net_grid = 0.0;
  double solar_thermal = 0.0;
  double hx_thermal = 0.0;
  double mass_flow = 0.0;
  double section_area = 0.0;
  double soc = 0.0;
  double charge = 0.0;
  double discharge = 0.0;
  double cap_available = 0.0;
  double degradation = 0.0;
  double grid_import = 0.0;
  double grid_export = 0.0;
};

struct SorcSchedule {
  std::string id;
  double step_hours = 1.0;
  double soc_initial = 0.0;
  std::vector<SorcStep> steps;
  double total_cost = 0.0;
  milp::SolveStatus status = milp::SolveStatus::Optimal;
  double bound = 0.0;
  double gap = 0.0;
  milp::SolveStats stats;
};

/// Thrown when the scenario cannot be satisfied; rows() names the
/// constraints involved.
class InfeasibleScenario : public std::runtime_error {
 public:
  InfeasibleScenario(const std::string& what, std::vector<std::string> rows)
      : std::runtime_error(what), rows_(std::move(rows)) {}
  [[nodiscard]] const std::vector<std::string>& rows() const { return rows_; }

 private:
  std::vector<std::string> rows_;
};

class SolveFailure : public std::runtime_error {
 public:
  SolveFailure(const std::string& what, milp::SolveStatus status)
      : std::runtime_error(what), status_(status) {}
  [[nodiscard]] milp::SolveStatus status() const { return status_; }

 private:
  milp::SolveStatus status_;
};

/// Largest section area needed to reach x_max: x_max / (rho * v * dh_turbine).
[[nodiscard]] double derived_section_area_max(const OrcSpec& orc, const FluidProperties& fluid);
[[nodiscard]] double section_area_max(const MicrogridScenario& s);

/// Per-step production bound implied by solar heat, area and pump limits.
[[nodiscard]] double achievable_production(const MicrogridScenario& s, int step);

/// Row names of constraints that cannot hold for any decision values.
[[nodiscard]] std::vector<std::string> construction_conflicts(const MicrogridScenario& s);

[[nodiscard]] SorcModel build_sorc_model(const MicrogridScenario& s, BuildOptions options = {});

/// Reads a solved model back into a schedule. Wear is normalized to its
/// least admissible value and capacity recomputed from it.
[[nodiscard]] SorcSchedule extract_schedule(const MicrogridScenario& s, const SorcModel& built,
                                            const milp::Solution& solution);

/// Throws InfeasibleScenario or SolveFailure; GapLimit results are
/// returned with their status.
[[nodiscard]] SorcSchedule solve_sorc(const MicrogridScenario& s, BuildOptions options = {},
                                      milp::MilpLimits limits = {});

/// Objective recomputed from schedule fields alone.
[[nodiscard]] double schedule_cost(const MicrogridScenario& s, const SorcSchedule& schedule);

struct MassFlowReport {
  std::vector<double> per_step;
  double peak = 0.0;
};

[[nodiscard]] MassFlowReport mass_flow_report(const SorcSchedule& schedule,
                                              const FluidProperties& fluid);

struct AuditCheck {
  std::string name;
  double residual = 0.0;
};

/// Constraint residuals recomputed from schedule fields; a check passes
/// when its residual is <= the tolerance the caller applies.
[[nodiscard]] std::vector<AuditCheck> audit_schedule(const MicrogridScenario& s,
                                                     const SorcSchedule& schedule,
                                                     DegradationMode mode =
                                                         DegradationMode::RemainingCapacity);

}  // namespace orcgrid::sorc
