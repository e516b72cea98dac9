#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "orcgrid/domain.hpp"
#include "orcgrid/milp/model.hpp"
#include "orcgrid/milp/solution.hpp"
#include "orcgrid/sorc.hpp"

namespace orcgrid::tet {

/// Per-participant, per-step energy offers and needs in kWh, indexed [j][t].
struct ImbalanceSet {
  std::vector<std::string> participants;
  std::vector<std::vector<double>> export_offer;
  std::vector<std::vector<double>> import_need;

  [[nodiscard]] int size() const { return static_cast<int>(participants.size()); }
  [[nodiscard]] int horizon() const;
};

[[nodiscard]] ImbalanceSet imbalances_from(const std::vector<sorc::SorcSchedule>& schedules);

/// Participant index used for the virtual grid node.
inline constexpr int kGrid = -1;

struct Trade {
  int step = 0;
  int seller = kGrid;
  int buyer = kGrid;
  double kwh = 0.0;
  double cost = 0.0;
};

struct TradeClearing {
  std::vector<std::string> participants;
  std::vector<std::vector<std::vector<double>>> flux;  // [i][j][t]
  std::vector<std::vector<double>> grid_sales;          // [i][t]
  std::vector<std::vector<double>> grid_purchases;      // [j][t]
  std::vector<double> h_in;
  std::vector<double> h_out;
  double objective = 0.0;
  milp::SolveStats stats;

  [[nodiscard]] int horizon() const { return static_cast<int>(h_in.size()); }
  /// Positive-volume arcs ordered by (step, seller, buyer), grid last.
  [[nodiscard]] std::vector<Trade> trades(const TradeNetwork& net) const;
  [[nodiscard]] double p2p_volume() const;
};

/// Column indices; flux[i][i][t] is -1.
struct TetVariableMap {
  std::vector<int> steps;
  std::vector<std::vector<std::vector<int>>> flux;  // [i][j][k], k indexes steps
  std::vector<std::vector<int>> to_grid;            // [i][k]
  std::vector<std::vector<int>> from_grid;          // [j][k]
  std::vector<int> h_in;
  std::vector<int> h_out;
};

struct TetModel {
  milp::MilpModel model;
  TetVariableMap map;
};

class ClearingError : public std::runtime_error {
 public:
  ClearingError(const std::string& what, milp::SolveStatus status,
                std::vector<std::string> rows = {})
      : std::runtime_error(what), status_(status), rows_(std::move(rows)) {}
  [[nodiscard]] milp::SolveStatus status() const { return status_; }
  [[nodiscard]] const std::vector<std::string>& rows() const { return rows_; }

 private:
  milp::SolveStatus status_;
  std::vector<std::string> rows_;
};

/// Throws std::invalid_argument on mismatched participants, horizons or
/// negative imbalances.
void check_inputs(const ImbalanceSet& imb, const TradeNetwork& net);

/// All steps as one block-diagonal LP.
[[nodiscard]] TetModel build_tet_model(const ImbalanceSet& imb, const TradeNetwork& net);
/// The single-step block of step t (0-based).
[[nodiscard]] TetModel build_tet_step(const ImbalanceSet& imb, const TradeNetwork& net, int step);

struct TetOptions {
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Each step is solved on its own.
[[nodiscard]] TradeClearing solve_tet(const ImbalanceSet& imb, const TradeNetwork& net,
                                      const TetOptions& options = {});

/// Objective recomputed from the clearing's flows.
[[nodiscard]] double clearing_cost(const TradeClearing& clearing, const TradeNetwork& net);

/// Cost of routing every offer and need through the grid node only.
[[nodiscard]] double grid_only_cost(const ImbalanceSet& imb, const TradeNetwork& net);

struct ProsumerKpi {
  std::string id;
  double prosumer_cost = 0.0;
  double local_cost = 0.0;
  double market_cost = 0.0;
  double no_orc_cost = 0.0;
  double grid_import_kwh = 0.0;
  double grid_export_kwh = 0.0;
};

struct KpiReport {
  std::vector<ProsumerKpi> prosumers;
  double local_cost = 0.0;
  double trading_cost = 0.0;
  double grid_only_trading_cost = 0.0;
  double trading_gain = 0.0;
  double trading_savings = 0.0;
  double community_cost = 0.0;
  double no_orc_cost = 0.0;
  double savings_vs_no_orc = 0.0;
  double p2p_volume_kwh = 0.0;
};

/// Splits one schedule's cost into the market part and the rest.
[[nodiscard]] ProsumerKpi prosumer_kpi(const MicrogridScenario& s,
                                       const sorc::SorcSchedule& schedule);

/// (baseline - optimized) / baseline; 0 when the baseline is not positive.
[[nodiscard]] double relative_savings(double baseline, double optimized);

[[nodiscard]] KpiReport compute_kpis(const std::vector<MicrogridScenario>& scenarios,
                                     const std::vector<sorc::SorcSchedule>& schedules,
                                     const ImbalanceSet& imb, const TradeClearing& clearing,
                                     const TradeNetwork& net);

struct PipelineOptions {
  sorc::BuildOptions build;
  milp::MilpLimits limits;
  unsigned threads = 0;
};

struct PipelineResult {
  std::vector<sorc::SorcSchedule> schedules;
  ImbalanceSet imbalances;
  TradeClearing clearing;
  KpiReport kpi;
};

/// Stage-one failure of one prosumer; stage two never runs.
class PipelineError : public std::runtime_error {
 public:
  enum class Kind { Infeasible, Limit, Other };
  PipelineError(const std::string& what, std::string prosumer, Kind kind,
                std::vector<std::string> rows = {})
      : std::runtime_error(what), prosumer_(std::move(prosumer)), kind_(kind),
        rows_(std::move(rows)) {}
  [[nodiscard]] const std::string& prosumer() const { return prosumer_; }
  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] const std::vector<std::string>& rows() const { return rows_; }

 private:
  std::string prosumer_;
  Kind kind_;
  std::vector<std::string> rows_;
};

[[nodiscard]] PipelineResult run_pipeline(const std::vector<MicrogridScenario>& scenarios,
                                          const TradeNetwork& net,
                                          const PipelineOptions& options = {});

}  // namespace orcgrid::tet
