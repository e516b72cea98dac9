#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orcgrid/domain.hpp"
#include "orcgrid/sorc.hpp"

namespace orcgrid::sweeps {

enum class Axis { Fluid, Size, Collector, Weather };

enum class Metric {
  Objective,
  PeakMassFlow,
  GridImportTotal,
  BatteryThroughput,
  /// Collector area that lets the plant reach x_max at peak irradiance.
  RequiredCollectorArea,
};

[[nodiscard]] std::string_view to_string(Axis axis);
[[nodiscard]] std::string_view to_string(Metric metric);
[[nodiscard]] std::optional<Axis> parse_axis(std::string_view text);
[[nodiscard]] std::optional<Metric> parse_metric(std::string_view text);
[[nodiscard]] const std::vector<Metric>& all_metrics();

struct WeatherCase {
  std::string label;
  std::vector<double> irradiation;
};

struct SweepSpec {
  MicrogridScenario base;
  Axis axis = Axis::Size;
  std::vector<FluidProperties> fluids;
  std::vector<double> sizes_kw;
  std::vector<CollectorSpec> collectors;
  std::vector<WeatherCase> weathers;
  std::vector<Metric> outputs = all_metrics();
  sorc::BuildOptions build;
  milp::MilpLimits limits;
  unsigned threads = 0;
};

struct Variant {
  std::string label;
  MicrogridScenario scenario;
};

/// Size: x_max = size, z_max scaled by size / base x_max, section area
/// re-derived. Fluid: fluid replaced, section area re-derived. Collector:
/// technology and efficiency replaced, area kept. Weather: irradiation
/// replaced.
[[nodiscard]] std::vector<Variant> make_variants(const SweepSpec& spec);

struct SweepRow {
  std::string label;
  MicrogridScenario scenario;
  std::optional<sorc::SorcSchedule> schedule;
  std::vector<double> metrics;  // aligned with SweepTable::outputs
  std::string error;
};

struct SweepTable {
  Axis axis = Axis::Size;
  std::vector<Metric> outputs;
  std::vector<SweepRow> rows;
};

/// Metric value recomputed from scenario and schedule fields only.
[[nodiscard]] double compute_metric(Metric metric, const MicrogridScenario& s,
                                    const sorc::SorcSchedule& schedule);

/// Rows follow the axis order. A failing variant keeps its row with an
/// error message and empty metrics.
[[nodiscard]] SweepTable run_sweep(const SweepSpec& spec);

struct LocationRow {
  std::string label;
  double objective = 0.0;
  double baseline = 0.0;
  double savings = 0.0;
  std::string error;
};

struct LocationOptions {
  sorc::BuildOptions build;
  milp::MilpLimits limits;
  unsigned threads = 0;
};

/// Baseline per label: the same plant with zero irradiation, so the grid
/// and battery are the only sources. Throws std::invalid_argument on a
/// horizon mismatch.
[[nodiscard]] std::vector<LocationRow> compare_locations(const MicrogridScenario& base,
                                                         const std::vector<WeatherCase>& weathers,
                                                         const LocationOptions& options = {});

}  // namespace orcgrid::sweeps
