#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "orcgrid/sorc.hpp"

namespace orcgrid::sorc {

namespace {

double nonneg(double value) { return value > 0.0 ? value : 0.0; }

std::string join_rows(const std::vector<std::string>& rows, std::size_t limit) {
  std::string out;
  for (std::size_t i = 0; i < rows.size() && i < limit; ++i) {
    if (i) out += ", ";
    out += rows[i];
  }
  if (rows.size() > limit) out += fmt::format(", ... ({} rows)", rows.size());
  return out;
}

}  // namespace

SorcSchedule extract_schedule(const MicrogridScenario& s, const SorcModel& built,
                              const milp::Solution& solution) {
  const auto& v = built.map;
  const auto& val = solution.values;
  const bool literal = built.degradation == DegradationMode::LiteralFactor;
  const double rate = s.battery.fade / s.battery.throughput;
  SorcSchedule out;
  out.id = s.id;
  out.step_hours = s.time.step_hours;
  out.soc_initial = val[static_cast<std::size_t>(v.soc0)];
  out.status = solution.status;
  out.bound = solution.bound;
  out.gap = solution.gap;
  out.stats = solution.stats;
  double soc_prev = out.soc_initial;
  double cap_prev = s.battery.b_max;
  for (std::size_t k = 0; k < v.x.size(); ++k) {
    auto at = [&](const std::vector<int>& idx) { return val[static_cast<std::size_t>(idx[k])]; };
    SorcStep st;
    st.production_kw = nonneg(at(v.x));
    st.pump_kw = nonneg(at(v.z));
    st.net_grid = at(v.g);
    st.solar_thermal = nonneg(at(v.q_solar));
    st.hx_thermal = nonneg(at(v.q_in));
    st.mass_flow = nonneg(at(v.m_orc));
    st.section_area = nonneg(at(v.area));
    st.soc = nonneg(at(v.soc));
    st.charge = at(v.y_in) < 0.5 ? 0.0 : nonneg(at(v.charge));
    st.discharge = at(v.y_out) < 0.5 ? 0.0 : nonneg(at(v.discharge));
    double e_in = nonneg(at(v.e_in));
    double e_out = nonneg(at(v.e_out));
    const double shared = std::min(e_in, e_out);
    e_in -= shared;
    e_out -= shared;
    st.grid_import = e_in;
    st.grid_export = e_out;
    if (literal) {
      st.degradation = nonneg(at(v.wear));
      st.cap_available = nonneg(at(v.cap));
    } else {
      st.degradation = rate * std::abs(st.soc - soc_prev);
      st.cap_available = cap_prev - s.battery.b_max * st.degradation;
      cap_prev = st.cap_available;
    }
    soc_prev = st.soc;
    out.steps.push_back(st);
  }
  out.total_cost = schedule_cost(s, out);
  return out;
}

double schedule_cost(const MicrogridScenario& s, const SorcSchedule& schedule) {
  const double dt = s.time.step_hours;
  double total = 0.0;
  for (std::size_t k = 0; k < schedule.steps.size(); ++k) {
    const auto& st = schedule.steps[k];
    total += dt * s.production_cost * st.production_kw;
    total += dt * s.battery.cost_cycle * (st.charge + st.discharge);
    total += s.tariff.price_buy[k] * st.grid_import - s.tariff.price_sell[k] * st.grid_export;
  }
  return total;
}

SorcSchedule solve_sorc(const MicrogridScenario& s, BuildOptions options,
                        milp::MilpLimits limits) {
  if (auto rows = construction_conflicts(s); !rows.empty()) {
    throw InfeasibleScenario(
        fmt::format("prosumer '{}': orc.x_min exceeds achievable production ({})", s.id,
                    join_rows(rows, 12)),
        std::move(rows));
  }
  const SorcModel built = build_sorc_model(s, options);
  const milp::Solution sol = milp::solve_milp(built.model, limits);
  switch (sol.status) {
    case milp::SolveStatus::Infeasible:
      throw InfeasibleScenario(fmt::format("prosumer '{}' is infeasible: {}", s.id,
                                           join_rows(sol.conflict_rows, 12)),
                               sol.conflict_rows);
    case milp::SolveStatus::Unbounded:
      throw SolveFailure(fmt::format("prosumer '{}' is unbounded", s.id), sol.status);
    case milp::SolveStatus::GapLimit:
      if (!sol.has_incumbent())
        throw SolveFailure(fmt::format("prosumer '{}': limit reached with no incumbent", s.id),
                           sol.status);
      break;
    case milp::SolveStatus::Optimal:
      break;
  }
  return extract_schedule(s, built, sol);
}

MassFlowReport mass_flow_report(const SorcSchedule& schedule, const FluidProperties& fluid) {
  MassFlowReport r;
  for (const auto& st : schedule.steps) {
    const double m = fluid.density * st.section_area * fluid.velocity;
    r.per_step.push_back(m);
    r.peak = std::max(r.peak, m);
  }
  return r;
}

std::vector<AuditCheck> audit_schedule(const MicrogridScenario& s, const SorcSchedule& schedule,
                                       DegradationMode mode) {
  const double dt = s.time.step_hours;
  const auto& bat = s.battery;
  const auto& orc = s.orc;
  const auto& fl = s.fluid;
  const double rate = bat.fade / bat.throughput;
  const double area_max = section_area_max(s);
  const bool literal = mode == DegradationMode::LiteralFactor;

  std::vector<AuditCheck> checks;
  auto check = [&](const char* name) -> double& {
    for (auto& c : checks)
      if (c.name == name) return c.residual;
    checks.push_back({name, 0.0});
    return checks.back().residual;
  };
  auto worst = [](double& slot, double r) { slot = std::max(slot, r); };
  auto outside = [](double value, double lo, double hi) {
    return std::max({0.0, lo - value, value - hi});
  };

  worst(check("initial_state"), std::abs(schedule.soc_initial));
  double soc_prev = schedule.soc_initial;
  double cap_prev = bat.b_max;
  for (std::size_t k = 0; k < schedule.steps.size(); ++k) {
    const auto& st = schedule.steps[k];
    worst(check("grid_balance"),
          std::abs(st.net_grid - st.production_kw + st.pump_kw + bat.eta_round * st.charge -
                   st.discharge / bat.eta_round));
    worst(check("demand_cover"),
          nonneg(s.demand[k] - (dt * st.net_grid + st.grid_import - st.grid_export)));
    worst(check("net_production"),
          std::abs(st.production_kw - st.pump_kw - orc.eta_cycle * st.hx_thermal));
    worst(check("turbine"), std::abs(st.production_kw - fl.dh_turbine * st.mass_flow));
    worst(check("pump"), std::abs(st.pump_kw - fl.dh_pump * st.mass_flow));
    worst(check("operating_limits"),
          std::max({outside(st.production_kw, orc.x_min, orc.x_max),
                    outside(st.pump_kw, orc.z_min, orc.z_max),
                    outside(st.net_grid, s.tariff.g_min, s.tariff.g_max)}));
    worst(check("lamination"),
          std::abs(st.mass_flow - fl.density * st.section_area * fl.velocity));
    worst(check("section_area"), outside(st.section_area, 0.0, area_max));
    worst(check("thermal_ceiling"), nonneg(st.hx_thermal - orc.eta_hx * st.solar_thermal));
    worst(check("solar_heat"),
          std::abs(st.solar_thermal -
                   s.collector.efficiency * s.collector.area * s.irradiation[k]));
    worst(check("battery_state"),
          std::abs(st.soc - soc_prev - dt * bat.eta_round * st.charge +
                   dt * st.discharge / bat.eta_round));
    worst(check("exclusive_flows"), st.charge * st.discharge);
    worst(check("flow_gates"),
          std::max(nonneg(dt * st.charge - bat.b_max), nonneg(dt * st.discharge - bat.b_max)));
    worst(check("capacity_limits"),
          std::max({nonneg(dt * st.charge - st.cap_available),
                    nonneg(dt * st.discharge - st.cap_available),
                    literal ? 0.0 : nonneg(st.soc - st.cap_available),
                    outside(st.soc, literal ? 0.0 : bat.b_min, bat.b_max)}));
    worst(check("wear_lower_bound"), nonneg(rate * std::abs(st.soc - soc_prev) - st.degradation));
    if (literal) {
      worst(check("capacity_factor"), nonneg(st.cap_available - st.degradation * bat.b_max));
    } else {
      worst(check("wear_exact"), std::abs(st.degradation - rate * std::abs(st.soc - soc_prev)));
      worst(check("capacity_fade"),
            std::abs(st.cap_available - cap_prev + bat.b_max * st.degradation));
      worst(check("capacity_monotone"), nonneg(st.cap_available - cap_prev));
    }
    worst(check("nonnegativity"),
          nonneg(-std::min({st.production_kw, st.pump_kw, st.solar_thermal, st.hx_thermal,
                            st.mass_flow, st.section_area, st.soc, st.charge, st.discharge,
                            st.cap_available, st.degradation, st.grid_import,
                            st.grid_export})));
    soc_prev = st.soc;
    cap_prev = st.cap_available;
  }
  worst(check("total_cost"), std::abs(schedule.total_cost - schedule_cost(s, schedule)));
  return checks;
}

}  // namespace orcgrid::sorc
