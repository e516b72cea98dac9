#pragma once

#include <string>
#include <vector>

#include "orcgrid/domain.hpp"

// Synthetic inputs. Nothing here is measured data.
namespace orcgrid::profiles {

struct ClearSkySite {
  double latitude_deg = 44.5;
  int first_day_of_year = 172;  // 1-based
};

/// Beam irradiance on a horizontal plane in kW/m2; step t covers
/// [t*step, (t+1)*step) hours after local solar midnight of the first day.
[[nodiscard]] std::vector<double> clear_sky_irradiation(const ClearSkySite& site, int horizon,
                                                        double step_hours = 1.0);

/// Daytime plateau on weekdays, low weekend base; kWh per step.
[[nodiscard]] std::vector<double> industrial_demand(int horizon, double peak_kw,
                                                    double step_hours = 1.0);

/// Morning and evening peaks over a night base; kWh per step.
[[nodiscard]] std::vector<double> household_demand(int horizon, double peak_kw,
                                                   double step_hours = 1.0);

[[nodiscard]] std::vector<double> constant(int horizon, double value);

/// Plant with an Ethanol 2 kW ORC, ETC collector and a small battery.
[[nodiscard]] MicrogridScenario demo_plant(std::string id, int horizon);

}  // namespace orcgrid::profiles
