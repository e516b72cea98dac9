#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "orcgrid/catalog.hpp"
#include "orcgrid/domain.hpp"
#include "orcgrid/sorc.hpp"
#include "orcgrid/sweeps.hpp"
#include "orcgrid/tet.hpp"

namespace orcgrid::io {

/// Everything a run produced. Schedules align with scenarios; clearing,
/// network and kpi are present for community runs only, sweep and
/// locations for sweep runs only.
struct ResultBundle {
  std::string tool_version;
  std::string input_digest;
  std::optional<std::string> currency_label;
  sorc::DegradationMode degradation = sorc::DegradationMode::RemainingCapacity;
  std::vector<MicrogridScenario> scenarios;
  std::vector<sorc::SorcSchedule> schedules;
  std::optional<TradeNetwork> network;
  std::optional<tet::TradeClearing> clearing;
  std::optional<tet::KpiReport> kpi;
  std::optional<sweeps::SweepTable> sweep;
  std::vector<sweeps::LocationRow> locations;
};

/// File name and content, in write order.
using FileSet = std::vector<std::pair<std::string, std::string>>;

class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 9 significant digits; negative zero prints as 0, non-finite as empty.
[[nodiscard]] std::string format_number(double value);

[[nodiscard]] std::string schedule_csv(const MicrogridScenario& s, const sorc::SorcSchedule& schedule);
/// Header only when there are no positive flows.
[[nodiscard]] std::string trades_csv(const tet::TradeClearing& clearing, const TradeNetwork& net);

/// Fluids, sizes and collectors as three CSV blocks separated by blank
/// lines; values printed with the same 9-digit rule as the exports.
[[nodiscard]] std::string catalog_text(const Catalog& catalog);

/// Pure function of the bundle; repeated calls give identical bytes.
[[nodiscard]] FileSet render_results(const ResultBundle& bundle);

/// Creates `dir` if needed and writes render_results(bundle). Returns the
/// written paths. Throws ExportError when a file cannot be written.
std::vector<std::filesystem::path> export_results(const ResultBundle& bundle,
                                                  const std::filesystem::path& dir);

}  // namespace orcgrid::io
