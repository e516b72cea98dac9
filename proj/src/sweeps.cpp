#include "orcgrid/sweeps.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

#include "orcgrid/parallel.hpp"
#include "orcgrid/tet.hpp"

namespace orcgrid::sweeps {

namespace {

constexpr std::pair<Axis, std::string_view> kAxes[] = {
    {Axis::Fluid, "fluid"}, {Axis::Size, "size"}, {Axis::Collector, "collector"},
    {Axis::Weather, "weather"}};

constexpr std::pair<Metric, std::string_view> kMetrics[] = {
    {Metric::Objective, "objective"},
    {Metric::PeakMassFlow, "peak_mass_flow"},
    {Metric::GridImportTotal, "grid_import_total"},
    {Metric::BatteryThroughput, "battery_throughput"},
    {Metric::RequiredCollectorArea, "required_collector_area"}};

std::string size_label(double size) { return fmt::format("{:g} kW", size); }

}  // namespace

std::string_view to_string(Axis axis) {
  for (const auto& [a, name] : kAxes)
    if (a == axis) return name;
  return "size";
}

std::string_view to_string(Metric metric) {
  for (const auto& [m, name] : kMetrics)
    if (m == metric) return name;
  return "objective";
}

std::optional<Axis> parse_axis(std::string_view text) {
  for (const auto& [a, name] : kAxes)
    if (name == text) return a;
  return std::nullopt;
}

std::optional<Metric> parse_metric(std::string_view text) {
  for (const auto& [m, name] : kMetrics)
    if (name == text) return m;
  return std::nullopt;
}

const std::vector<Metric>& all_metrics() {
  static const std::vector<Metric> metrics = [] {
    std::vector<Metric> out;
    for (const auto& [m, name] : kMetrics) out.push_back(m);
    return out;
  }();
  return metrics;
}

std::vector<Variant> make_variants(const SweepSpec& spec) {
  std::vector<Variant> out;
  const auto& base = spec.base;
  switch (spec.axis) {
    case Axis::Fluid:
      for (const auto& f : spec.fluids) {
        auto s = base;
        s.fluid = f;
        s.orc.section_area_max.reset();
        out.push_back({f.name, std::move(s)});
      }
      break;
    case Axis::Size:
      for (double size : spec.sizes_kw) {
        auto s = base;
        const double scale = base.orc.x_max > 0.0 ? size / base.orc.x_max : 0.0;
        s.orc.x_max = size;
        s.orc.z_max = scale > 0.0 ? base.orc.z_max * scale
                                  : size * base.fluid.dh_pump / base.fluid.dh_turbine;
        s.orc.x_min = std::min(base.orc.x_min, size);
        s.orc.z_min = std::min(base.orc.z_min, s.orc.z_max);
        s.orc.section_area_max.reset();
        out.push_back({size_label(size), std::move(s)});
      }
      break;
    case Axis::Collector:
      for (const auto& c : spec.collectors) {
        auto s = base;
        s.collector.technology = c.technology;
        s.collector.efficiency = c.efficiency;
        out.push_back({std::string(to_string(c.technology)), std::move(s)});
      }
      break;
    case Axis::Weather:
      for (const auto& w : spec.weathers) {
        auto s = base;
        s.irradiation = w.irradiation;
        out.push_back({w.label, std::move(s)});
      }
      break;
  }
  return out;
}

double compute_metric(Metric metric, const MicrogridScenario& s,
                      const sorc::SorcSchedule& schedule) {
  switch (metric) {
    case Metric::Objective:
      return sorc::schedule_cost(s, schedule);
    case Metric::PeakMassFlow:
      return sorc::mass_flow_report(schedule, s.fluid).peak;
    case Metric::GridImportTotal: {
      double total = 0.0;
      for (const auto& st : schedule.steps) total += st.grid_import;
      return total;
    }
    case Metric::BatteryThroughput: {
      double total = 0.0;
      for (const auto& st : schedule.steps) total += (st.charge + st.discharge) * s.time.step_hours;
      return total;
    }
    case Metric::RequiredCollectorArea: {
      const double peak = *std::max_element(s.irradiation.begin(), s.irradiation.end());
      const double net = s.orc.x_max * (1.0 - s.fluid.dh_pump / s.fluid.dh_turbine);
      const double per_area = s.orc.eta_cycle * s.orc.eta_hx * s.collector.efficiency * peak;
      return per_area > 0.0 ? net / per_area : milp::kInf;
    }
  }
  return 0.0;
}

SweepTable run_sweep(const SweepSpec& spec) {
  SweepTable table;
  table.axis = spec.axis;
  table.outputs = spec.outputs;
  const auto variants = make_variants(spec);
  if (variants.empty()) throw std::invalid_argument("sweep axis list is empty");
  table.rows.resize(variants.size());
  parallel_for(variants.size(), spec.threads, [&](std::size_t k) {
    auto& row = table.rows[k];
    row.label = variants[k].label;
    row.scenario = variants[k].scenario;
    try {
      row.scenario = validate_scenario(row.scenario);
      row.schedule = sorc::solve_sorc(row.scenario, spec.build, spec.limits);
      for (Metric m : spec.outputs) row.metrics.push_back(compute_metric(m, row.scenario, *row.schedule));
    } catch (const std::exception& e) {
      row.schedule.reset();
      row.metrics.clear();
      row.error = e.what();
    }
  });
  return table;
}

std::vector<LocationRow> compare_locations(const MicrogridScenario& base,
                                           const std::vector<WeatherCase>& weathers,
                                           const LocationOptions& options) {
  for (const auto& w : weathers)
    if (static_cast<int>(w.irradiation.size()) != base.time.horizon)
      throw std::invalid_argument(fmt::format("weather '{}' has {} steps, horizon is {}", w.label,
                                              w.irradiation.size(), base.time.horizon));
  auto dark = base;
  dark.irradiation.assign(static_cast<std::size_t>(base.time.horizon), 0.0);
  dark.orc.x_min = 0.0;
  dark.orc.z_min = 0.0;
  const double baseline = sorc::solve_sorc(dark, options.build, options.limits).total_cost;

  std::vector<LocationRow> rows(weathers.size());
  parallel_for(weathers.size(), options.threads, [&](std::size_t k) {
    auto& row = rows[k];
    row.label = weathers[k].label;
    row.baseline = baseline;
    try {
      auto s = base;
      s.irradiation = weathers[k].irradiation;
      s = validate_scenario(s);
      row.objective = sorc::solve_sorc(s, options.build, options.limits).total_cost;
      row.savings = tet::relative_savings(baseline, row.objective);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return rows;
}

}  // namespace orcgrid::sweeps
