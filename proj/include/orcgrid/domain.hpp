#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace orcgrid {

/// Uniform time discretization of the planning horizon.
struct TimeGrid {
  double step_hours = 1.0;
  int horizon = 1;
};

/// Working-fluid data. Enthalpy drops are direct inputs (kJ/kg); see
/// enthalpy_drops_from_temperatures() when only temperature lifts are known.
struct FluidProperties {
  std::string name;
  double molecular_weight = 0.0;  // kg/mol
  double t_crit = 0.0;            // degC
  double p_crit = 0.0;            // MPa
  double cp = 0.0;                // J/(kg degC)
  double density = 0.0;           // kg/m3
  double velocity = 0.0;          // m/s
  double dh_turbine = 0.0;        // kJ/kg
  double dh_pump = 0.0;           // kJ/kg
};

struct EnthalpyDrops {
  double dh_turbine = 0.0;
  double dh_pump = 0.0;
};

/// dh_turbine = cp * dT_turbine * eta_turbine / 1000,
/// dh_pump = cp * dT_pump / (eta_pump * 1000).
[[nodiscard]] EnthalpyDrops enthalpy_drops_from_temperatures(
    double cp, double dt_turbine, double eta_turbine, double dt_pump,
    double eta_pump);

enum class CollectorTech { FPC, ETC, CPC, PTC, LFR, Custom };

[[nodiscard]] std::string_view to_string(CollectorTech tech);
[[nodiscard]] std::optional<CollectorTech> parse_collector_tech(std::string_view text);

struct CollectorSpec {
  CollectorTech technology = CollectorTech::Custom;
  double efficiency = 0.0;  // fraction
  double area = 0.0;        // m2
};

struct OrcSpec {
  double eta_cycle = 0.0;  // electric out per unit heat in
  double eta_hx = 0.0;     // heat exchanger
  double x_min = 0.0;      // kW
  double x_max = 0.0;      // kW
  double z_min = 0.0;      // kW
  double z_max = 0.0;      // kW
  /// Upper bound on the regulated section area; derived from x_max when absent.
  std::optional<double> section_area_max;
};

struct BatterySpec {
  double eta_round = 1.0;
  double b_min = 0.0;       // kWh
  double b_max = 0.0;       // kWh
  double fade = 0.0;        // capacity fraction lost over the lifetime throughput
  double throughput = 1.0;  // kWh
  double cost_cycle = 0.0;  // currency/kWh
};

struct GridTariff {
  double g_min = 0.0;  // kW
  double g_max = 0.0;  // kW
  std::vector<double> price_buy;   // currency/kWh per step
  std::vector<double> price_sell;  // currency/kWh per step
};

struct MicrogridScenario {
  std::string id;
  TimeGrid time;
  FluidProperties fluid;
  CollectorSpec collector;
  OrcSpec orc;
  BatterySpec battery;
  GridTariff tariff;
  std::vector<double> demand;       // kWh per step
  std::vector<double> irradiation;  // kW/m2 per step
  double production_cost = 0.0;     // currency/kWh
};

/// Community trading arcs. Matrices are indexed [seller][buyer]; the
/// diagonal is unused.
struct TradeNetwork {
  std::vector<std::string> participants;
  std::vector<std::vector<double>> f_min;
  std::vector<std::vector<double>> f_max;
  std::vector<std::vector<std::vector<double>>> transmission_cost;  // [i][j][t]
  std::vector<std::vector<double>> grid_buy_cost;                   // [j][t]
  std::vector<std::vector<double>> grid_sell_cost;                  // [i][t]

  [[nodiscard]] int size() const { return static_cast<int>(participants.size()); }
  [[nodiscard]] int horizon() const;
  [[nodiscard]] std::optional<int> index_of(std::string_view id) const;
};

/// Fully connected network with uniform costs and f in [0, +inf).
[[nodiscard]] TradeNetwork make_uniform_network(std::vector<std::string> participants,
                                                 int horizon, double transmission_cost,
                                                 double grid_buy_cost,
                                                 double grid_sell_cost);

struct Violation {
  std::string field;
  std::string message;
  std::string observed;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations);
  [[nodiscard]] const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Every violated invariant, in field order.
[[nodiscard]] std::vector<Violation> check_scenario(const MicrogridScenario& scenario);
[[nodiscard]] std::vector<Violation> check_network(const TradeNetwork& network, int horizon);

/// Returns the scenario unchanged when valid; throws ValidationError with
/// all violations otherwise.
[[nodiscard]] MicrogridScenario validate_scenario(MicrogridScenario raw);
[[nodiscard]] TradeNetwork validate_network(TradeNetwork raw, int horizon);

}  // namespace orcgrid
