#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "orcgrid/sorc.hpp"

namespace orcgrid::sorc {

using milp::kInf;
using milp::RowSense;
using milp::Term;

double derived_section_area_max(const OrcSpec& orc, const FluidProperties& fluid) {
  return orc.x_max / (fluid.density * fluid.velocity * fluid.dh_turbine);
}

double section_area_max(const MicrogridScenario& s) {
  return s.orc.section_area_max ? *s.orc.section_area_max
                                : derived_section_area_max(s.orc, s.fluid);
}

double achievable_production(const MicrogridScenario& s, int step) {
  const auto& f = s.fluid;
  const double ratio = f.dh_pump / f.dh_turbine;
  const double q_solar = s.collector.efficiency * s.collector.area *
                         s.irradiation[static_cast<std::size_t>(step)];
  const double by_heat = s.orc.eta_cycle * s.orc.eta_hx * q_solar / (1.0 - ratio);
  const double by_area = section_area_max(s) * f.density * f.velocity * f.dh_turbine;
  const double by_pump = ratio > 0.0 ? s.orc.z_max / ratio : kInf;
  return std::min({s.orc.x_max, by_heat, by_area, by_pump});
}

std::vector<std::string> construction_conflicts(const MicrogridScenario& s) {
  std::vector<std::string> rows;
  const double ratio = s.fluid.dh_pump / s.fluid.dh_turbine;
  double floor = s.orc.x_min;
  if (s.orc.z_min > 0.0) floor = std::max(floor, ratio > 0.0 ? s.orc.z_min / ratio : kInf);
  if (floor <= 0.0) return rows;
  for (int t = 0; t < s.time.horizon; ++t) {
    const double cap = achievable_production(s, t);
    if (floor > cap + 1e-9 * std::max(1.0, floor)) {
      const int k = t + 1;
      for (const char* row : {"net_production", "turbine", "pump", "lamination",
                              "thermal_ceiling", "solar_heat"})
        rows.push_back(fmt::format("{}_{}", row, k));
    }
  }
  return rows;
}

SorcModel build_sorc_model(const MicrogridScenario& s, BuildOptions options) {
  SorcModel out;
  out.degradation = options.degradation;
  auto& m = out.model;
  auto& v = out.map;
  m.name = "sorc_" + s.id;
  const int horizon = s.time.horizon;
  const double dt = s.time.step_hours;
  const auto& orc = s.orc;
  const auto& bat = s.battery;
  const auto& fl = s.fluid;
  const bool literal = options.degradation == DegradationMode::LiteralFactor;
  const double wear_rate = bat.fade / bat.throughput;
  const double area_max = section_area_max(s);

  v.soc0 = m.add_var("b_0", 0.0, 0.0);
  if (!literal) v.cap0 = m.add_var("cap_0", bat.b_max, bat.b_max);

  for (int t = 1; t <= horizon; ++t) {
    auto name = [t](const char* base) { return fmt::format("{}_{}", base, t); };
    v.x.push_back(m.add_var(name("x"), orc.x_min, orc.x_max));
    v.z.push_back(m.add_var(name("z"), orc.z_min, orc.z_max));
    v.g.push_back(m.add_var(name("g"), s.tariff.g_min, s.tariff.g_max));
    v.q_in.push_back(m.add_var(name("q_in"), 0.0, kInf));
    v.q_solar.push_back(m.add_var(name("q_solar"), 0.0, kInf));
    v.m_orc.push_back(m.add_var(name("m_orc"), 0.0, kInf));
    v.area.push_back(m.add_var(name("A"), 0.0, area_max));
    v.soc.push_back(m.add_var(name("b"), literal ? 0.0 : bat.b_min, bat.b_max));
    const double flow_floor = literal ? bat.b_min / dt : 0.0;
    v.charge.push_back(m.add_var(name("b_in"), flow_floor, kInf));
    v.discharge.push_back(m.add_var(name("b_out"), flow_floor, kInf));
    v.y_in.push_back(m.add_binary(name("y_in")));
    v.y_out.push_back(m.add_binary(name("y_out")));
    v.cap.push_back(m.add_var(name("cap"), 0.0, literal ? kInf : bat.b_max));
    v.wear.push_back(m.add_var(name(literal ? "d" : "w"), 0.0, kInf));
    v.e_in.push_back(m.add_var(name("e_in"), 0.0, kInf));
    v.e_out.push_back(m.add_var(name("e_out"), 0.0, kInf));
  }

  for (int t = 1; t <= horizon; ++t) {
    const auto k = static_cast<std::size_t>(t - 1);
    auto name = [t](const char* base) { return fmt::format("{}_{}", base, t); };
    const int x = v.x[k], z = v.z[k], g = v.g[k], q_in = v.q_in[k], q_sol = v.q_solar[k];
    const int mo = v.m_orc[k], a = v.area[k], b = v.soc[k], bi = v.charge[k],
              bo = v.discharge[k], yi = v.y_in[k], yo = v.y_out[k], cap = v.cap[k],
              w = v.wear[k], ei = v.e_in[k], eo = v.e_out[k];
    const int b_prev = t == 1 ? v.soc0 : v.soc[k - 1];

    m.add_row(name("grid_balance"),
              {{g, 1.0}, {x, -1.0}, {z, 1.0}, {bi, bat.eta_round}, {bo, -1.0 / bat.eta_round}},
              RowSense::EQ, 0.0);
    m.add_row(name("demand_cover"), {{g, dt}, {ei, 1.0}, {eo, -1.0}}, RowSense::GE,
              s.demand[k]);
    m.add_row(name("net_production"), {{x, 1.0}, {z, -1.0}, {q_in, -orc.eta_cycle}},
              RowSense::EQ, 0.0);
    m.add_row(name("turbine"), {{x, 1.0}, {mo, -fl.dh_turbine}}, RowSense::EQ, 0.0);
    m.add_row(name("pump"), {{z, 1.0}, {mo, -fl.dh_pump}}, RowSense::EQ, 0.0);
    m.add_row(name("lamination"), {{mo, 1.0}, {a, -fl.density * fl.velocity}}, RowSense::EQ,
              0.0);
    m.add_row(name("thermal_ceiling"), {{q_in, 1.0}, {q_sol, -orc.eta_hx}}, RowSense::LE, 0.0);
    m.add_row(name("solar_heat"), {{q_sol, 1.0}}, RowSense::EQ,
              s.collector.efficiency * s.collector.area * s.irradiation[k]);
    m.add_row(name("battery_state"),
              {{b, 1.0}, {b_prev, -1.0}, {bi, -dt * bat.eta_round}, {bo, dt / bat.eta_round}},
              RowSense::EQ, 0.0);
    m.add_row(name("battery_mode"), {{yi, 1.0}, {yo, 1.0}}, RowSense::EQ, 1.0);
    m.add_row(name("discharge_gate"), {{bo, dt}, {yo, -bat.b_max}}, RowSense::LE, 0.0);
    m.add_row(name("charge_gate"), {{bi, dt}, {yi, -bat.b_max}}, RowSense::LE, 0.0);
    m.add_row(name("wear_up"), {{w, 1.0}, {b, -wear_rate}, {b_prev, wear_rate}}, RowSense::GE,
              0.0);
    m.add_row(name("wear_down"), {{w, 1.0}, {b, wear_rate}, {b_prev, -wear_rate}},
              RowSense::GE, 0.0);
    if (literal) {
      m.add_row(name("capacity_factor"), {{cap, 1.0}, {w, -bat.b_max}}, RowSense::LE, 0.0);
    } else {
      const int cap_prev = t == 1 ? v.cap0 : v.cap[k - 1];
      m.add_row(name("capacity_fade"), {{cap, 1.0}, {cap_prev, -1.0}, {w, bat.b_max}},
                RowSense::EQ, 0.0);
      m.add_row(name("soc_capacity"), {{b, 1.0}, {cap, -1.0}}, RowSense::LE, 0.0);
    }
    m.add_row(name("charge_capacity"), {{bi, dt}, {cap, -1.0}}, RowSense::LE, 0.0);
    m.add_row(name("discharge_capacity"), {{bo, dt}, {cap, -1.0}}, RowSense::LE, 0.0);

    m.add_cost(x, dt * s.production_cost);
    m.add_cost(bi, dt * bat.cost_cycle);
    m.add_cost(bo, dt * bat.cost_cycle);
    m.add_cost(ei, s.tariff.price_buy[k]);
    m.add_cost(eo, -s.tariff.price_sell[k]);
  }
  return out;
}

}  // namespace orcgrid::sorc
