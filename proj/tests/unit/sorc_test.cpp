#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles/sorc_enumeration.hpp"
#include "orcgrid/catalog.hpp"
#include "orcgrid/milp/mps.hpp"
#include "orcgrid/profiles.hpp"
#include "orcgrid/sorc.hpp"
#include "support/random_scenarios.hpp"

namespace orcgrid::sorc {
namespace {

MicrogridScenario quiet(int horizon) {
  auto s = profiles::demo_plant("q", horizon);
  s.demand = profiles::constant(horizon, 0.0);
  s.irradiation = profiles::constant(horizon, 0.0);
  s.tariff.price_buy = profiles::constant(horizon, 0.0);
  s.tariff.price_sell = profiles::constant(horizon, 0.0);
  return s;
}

void expect_clean_audit(const MicrogridScenario& s, const SorcSchedule& sched,
                        DegradationMode mode = DegradationMode::RemainingCapacity) {
  for (const auto& c : audit_schedule(s, sched, mode)) {
    const double tol = c.name == "battery_state" ? 1e-7 * std::max(1.0, s.battery.b_max) : 1e-6;
    EXPECT_LE(c.residual, tol) << c.name;
  }
}

TEST(BuildSorc, ZeroScenarioCostsNothing) {
  const auto s = quiet(1);
  const auto sched = solve_sorc(s);
  ASSERT_EQ(sched.steps.size(), 1u);
  EXPECT_EQ(sched.total_cost, 0.0);
  const auto& st = sched.steps[0];
  EXPECT_EQ(st.production_kw, 0.0);
  EXPECT_EQ(st.charge, 0.0);
  EXPECT_EQ(st.discharge, 0.0);
  EXPECT_EQ(st.grid_import, 0.0);
  EXPECT_EQ(st.grid_export, 0.0);
  EXPECT_EQ(st.mass_flow, 0.0);
  EXPECT_EQ(st.section_area, 0.0);
}

TEST(BuildSorc, DemandWithoutSunIsImported) {
  auto s = quiet(1);
  s.demand = {1.0};
  s.tariff.price_buy = {0.2};
  const auto sched = solve_sorc(s);
  EXPECT_NEAR(sched.steps[0].grid_import, 1.0, 1e-9);
  EXPECT_NEAR(sched.total_cost, 0.2, 1e-9);
  EXPECT_EQ(sched.steps[0].production_kw, 0.0);
}

TEST(BuildSorc, SolarHeatIsFixedByIrradiation) {
  auto s = quiet(1);
  s.irradiation = {0.5};
  s.collector = *find_collector(CollectorTech::ETC);
  s.collector.area = 10.0;
  const auto built = build_sorc_model(s);
  const auto& row = built.model.constraints[static_cast<std::size_t>([&] {
    for (int i = 0; i < built.model.num_rows(); ++i)
      if (built.model.constraints[static_cast<std::size_t>(i)].name == "solar_heat_1") return i;
    return -1;
  }())];
  EXPECT_EQ(row.sense, milp::RowSense::EQ);
  EXPECT_NEAR(row.rhs, 4.35, 1e-12);
  const auto sched = solve_sorc(s);
  EXPECT_NEAR(sched.steps[0].solar_thermal, 4.35, 1e-9);
}

TEST(SolveSorc, BatteryStartsEmpty) {
  auto s = quiet(2);
  s.demand = {2.0, 0.0};
  s.tariff.price_buy = {0.4, 0.1};
  s.battery.cost_cycle = 0.0;
  const auto sched = solve_sorc(s);
  EXPECT_EQ(sched.soc_initial, 0.0);
  EXPECT_EQ(sched.steps[0].discharge, 0.0);
  EXPECT_NEAR(sched.steps[0].grid_import, 2.0, 1e-9);
}

TEST(SolveSorc, TwoStepShiftThroughBattery) {
  auto s = quiet(2);
  s.irradiation = {1.0, 0.0};
  s.collector.area = 40.0;
  s.demand = {0.0, 1.0};
  s.tariff.price_buy = {0.3, 0.3};
  s.production_cost = 0.01;
  s.battery.cost_cycle = 0.001;
  s.battery.eta_round = 1.0;
  s.battery.fade = 0.0;
  const auto sched = solve_sorc(s);
  const double ratio = s.fluid.dh_pump / s.fluid.dh_turbine;
  const double x = 1.0 / (1.0 - ratio);
  EXPECT_NEAR(sched.steps[0].charge, 1.0, 1e-9);
  EXPECT_NEAR(sched.steps[1].discharge, 1.0, 1e-9);
  EXPECT_NEAR(sched.steps[0].production_kw, x, 1e-9);
  EXPECT_NEAR(sched.steps[1].grid_import, 0.0, 1e-9);
  EXPECT_NEAR(sched.total_cost, 0.01 * x + 0.002, 1e-9);
  const auto built = build_sorc_model(s);
  EXPECT_NEAR(oracle::enumerate_battery_modes(built), sched.total_cost, 1e-9);
  expect_clean_audit(s, sched);
}

TEST(SolveSorc, InfeasibleMinimumProductionIsReportedBeforeSolve) {
  auto s = quiet(3);
  s.orc.x_min = 0.5;
  s.irradiation = {1.0, 0.0, 1.0};
  const auto rows = construction_conflicts(s);
  ASSERT_FALSE(rows.empty());
  EXPECT_NE(std::find(rows.begin(), rows.end(), "net_production_2"), rows.end());
  EXPECT_EQ(std::find(rows.begin(), rows.end(), "net_production_1"), rows.end());
  try {
    (void)solve_sorc(s);
    FAIL() << "expected InfeasibleScenario";
  } catch (const InfeasibleScenario& e) {
    EXPECT_EQ(e.rows(), rows);
    EXPECT_NE(std::string(e.what()).find("x_min"), std::string::npos);
  }
}

TEST(SolveSorc, SolverInfeasibilityCarriesRowNames) {
  auto s = quiet(1);
  s.tariff.g_min = 1.0;  // grid must receive power that cannot be produced
  s.tariff.g_max = 2.0;
  s.battery.b_max = 0.0;
  try {
    (void)solve_sorc(s);
    FAIL() << "expected InfeasibleScenario";
  } catch (const InfeasibleScenario& e) {
    EXPECT_FALSE(e.rows().empty());
  }
}

TEST(MassFlow, EthanolProduct) {
  const auto ethanol = *find_fluid("Ethanol");
  SorcSchedule sched;
  sched.steps.resize(2);
  sched.steps[0].section_area = 0.1;
  const auto r = mass_flow_report(sched, ethanol);
  EXPECT_NEAR(r.per_step[0], 0.0506200962, 1e-12);
  EXPECT_EQ(r.per_step[1], 0.0);
  EXPECT_NEAR(r.peak, 0.0506200962, 1e-12);
}

TEST(MassFlow, IdleStepsHaveNoFlow) {
  auto s = profiles::demo_plant("d", 24);
  const auto sched = solve_sorc(s);
  for (std::size_t t = 0; t < sched.steps.size(); ++t) {
    if (s.irradiation[t] == 0.0) {
      EXPECT_EQ(sched.steps[t].production_kw, 0.0);
      EXPECT_EQ(sched.steps[t].mass_flow, 0.0);
      EXPECT_EQ(sched.steps[t].section_area, 0.0);
    }
  }
}

MicrogridScenario two_kw_plant(const FluidProperties& fluid) {
  auto s = profiles::demo_plant("fluid", 24);
  s.fluid = fluid;
  s.orc.x_max = 2.0;
  s.orc.z_max = 2.0 * fluid.dh_pump / fluid.dh_turbine;
  s.demand = profiles::constant(24, 3.0);
  return s;
}

TEST(MassFlow, FluidRankingFollowsTurbineEnthalpyDrop) {
  std::vector<std::pair<double, std::string>> by_peak;
  std::vector<std::pair<double, std::string>> by_formula;
  for (const auto& f : builtin_catalog().fluids) {
    const auto s = two_kw_plant(f);
    const auto sched = solve_sorc(s);
    by_peak.emplace_back(mass_flow_report(sched, f).peak, f.name);
    by_formula.emplace_back(1.0 / f.dh_turbine, f.name);
    EXPECT_NEAR(by_peak.back().first, 2.0 / f.dh_turbine, 1e-9) << f.name;
  }
  std::sort(by_peak.begin(), by_peak.end());
  std::sort(by_formula.begin(), by_formula.end());
  for (std::size_t i = 0; i < by_peak.size(); ++i) EXPECT_EQ(by_peak[i].second, by_formula[i].second);
}

TEST(SolveSorc, ObjectiveNeverRisesWithPlantSize) {
  auto base = profiles::demo_plant("size", 48);
  double previous = std::numeric_limits<double>::infinity();
  for (double size : builtin_catalog().sizes_kw) {
    auto s = base;
    s.orc.x_max = size;
    s.orc.z_max = size * s.fluid.dh_pump / s.fluid.dh_turbine;
    const double cost = solve_sorc(s).total_cost;
    EXPECT_LE(cost, previous + 1e-6) << size;
    previous = cost;
  }
}

TEST(SolveSorc, LiteralDegradationSolvesAndAudits) {
  const auto s = profiles::demo_plant("lit", 24);
  const BuildOptions literal{DegradationMode::LiteralFactor};
  const auto sched = solve_sorc(s, literal);
  expect_clean_audit(s, sched, DegradationMode::LiteralFactor);
  const auto built = build_sorc_model(s, literal);
  EXPECT_EQ(built.map.cap0, -1);
  EXPECT_LE(solve_sorc(s, literal).total_cost, solve_sorc(s).total_cost + 1e-9);
}

TEST(SolveSorc, MpsRoundTripKeepsObjective) {
  const auto s = profiles::demo_plant("mps", 12);
  const auto built = build_sorc_model(s);
  const auto back = milp::read_mps(milp::write_mps(built.model));
  EXPECT_NEAR(milp::solve_milp(back).objective, milp::solve_milp(built.model).objective, 1e-9);
}

TEST(SolveSorc, IsDeterministic) {
  const auto s = profiles::demo_plant("det", 48);
  const auto a = solve_sorc(s);
  const auto b = solve_sorc(s);
  ASSERT_EQ(a.steps.size(), b.steps.size());
  EXPECT_EQ(a.total_cost, b.total_cost);
  for (std::size_t t = 0; t < a.steps.size(); ++t) {
    EXPECT_EQ(a.steps[t].production_kw, b.steps[t].production_kw);
    EXPECT_EQ(a.steps[t].soc, b.steps[t].soc);
  }
}

TEST(SorcProperty, RandomInstancesMatchModeEnumeration) {
  testgen::ScenarioGenerator gen(2024);
  for (int trial = 0; trial < 15; ++trial) {
    const auto s = gen.scenario(gen.integer(2, 3));
    SCOPED_TRACE(trial);
    const auto built = build_sorc_model(s);
    const double ref = oracle::enumerate_battery_modes(built);
    const auto sched = solve_sorc(s);
    EXPECT_NEAR(sched.total_cost, ref, 1e-6 * std::max(1.0, std::abs(ref)));
  }
}

TEST(SorcProperty, SchedulesSatisfyEveryConstraint) {
  testgen::ScenarioGenerator gen(77);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = gen.scenario(gen.integer(2, 12));
    SCOPED_TRACE(trial);
    const auto built = build_sorc_model(s);
    const auto sol = milp::solve_milp(built.model);
    ASSERT_EQ(sol.status, milp::SolveStatus::Optimal);
    const auto sched = extract_schedule(s, built, sol);
    EXPECT_NEAR(sched.total_cost, sol.objective, 1e-6 * std::max(1.0, std::abs(sol.objective)));
    expect_clean_audit(s, sched);
    double throughput = 0.0;
    double prev = 0.0;
    for (std::size_t t = 0; t < sched.steps.size(); ++t) {
      const auto& st = sched.steps[t];
      EXPECT_EQ(st.charge * st.discharge, 0.0);
      EXPECT_NEAR(st.production_kw - st.pump_kw, s.orc.eta_cycle * st.hx_thermal, 1e-6);
      throughput += std::abs(st.soc - prev);
      prev = st.soc;
    }
    if (throughput <= s.battery.throughput)
      EXPECT_GE(sched.steps.back().cap_available, (1.0 - s.battery.fade) * s.battery.b_max - 1e-9);
  }
}

TEST(SorcProperty, MoreIrradiationNeverCostsMore) {
  testgen::ScenarioGenerator gen(99);
  for (int trial = 0; trial < 10; ++trial) {
    auto lo = gen.scenario(6);
    auto hi = lo;
    for (auto& i : hi.irradiation) i += gen.uniform(0.0, 0.3);
    EXPECT_LE(solve_sorc(hi).total_cost, solve_sorc(lo).total_cost + 1e-6) << trial;
  }
}

}  // namespace
}  // namespace orcgrid::sorc
