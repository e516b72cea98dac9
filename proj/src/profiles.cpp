#include "orcgrid/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "orcgrid/catalog.hpp"

namespace orcgrid::profiles {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double clear_sky_at(double latitude_deg, double day, double solar_hour) {
  const double decl = 23.45 * kDeg * std::sin(2.0 * std::numbers::pi * (284.0 + day) / 365.0);
  const double omega = 15.0 * kDeg * (solar_hour - 12.0);
  const double phi = latitude_deg * kDeg;
  const double cos_z = std::sin(phi) * std::sin(decl) +
                       std::cos(phi) * std::cos(decl) * std::cos(omega);
  if (cos_z <= 0.01) return 0.0;
  const double air_mass = 1.0 / cos_z;
  return 1.353 * std::pow(0.7, std::pow(air_mass, 0.678)) * cos_z;
}

}  // namespace

std::vector<double> clear_sky_irradiation(const ClearSkySite& site, int horizon,
                                          double step_hours) {
  std::vector<double> out(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon; ++t) {
    const double hour = (t + 0.5) * step_hours;
    const double day = site.first_day_of_year + std::floor(hour / 24.0);
    const double value = clear_sky_at(site.latitude_deg, day, std::fmod(hour, 24.0));
    out[static_cast<std::size_t>(t)] = std::round(value * 1e6) / 1e6;
  }
  return out;
}

std::vector<double> industrial_demand(int horizon, double peak_kw, double step_hours) {
  std::vector<double> out(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon; ++t) {
    const double hour = (t + 0.5) * step_hours;
    const int day = static_cast<int>(hour / 24.0) % 7;
    const double h = std::fmod(hour, 24.0);
    double level = 0.15;
    if (day < 5 && h >= 7.0 && h < 18.0) level = (h >= 12.0 && h < 13.0) ? 0.7 : 1.0;
    out[static_cast<std::size_t>(t)] = std::round(level * peak_kw * step_hours * 1e6) / 1e6;
  }
  return out;
}

std::vector<double> household_demand(int horizon, double peak_kw, double step_hours) {
  std::vector<double> out(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon; ++t) {
    const double h = std::fmod((t + 0.5) * step_hours, 24.0);
    const double morning = std::exp(-0.5 * std::pow((h - 7.5) / 1.2, 2.0));
    const double evening = std::exp(-0.5 * std::pow((h - 20.0) / 1.8, 2.0));
    const double level = 0.2 + 0.5 * morning + 0.8 * evening;
    out[static_cast<std::size_t>(t)] =
        std::round(std::min(1.0, level) * peak_kw * step_hours * 1e6) / 1e6;
  }
  return out;
}

std::vector<double> constant(int horizon, double value) {
  return std::vector<double>(static_cast<std::size_t>(horizon), value);
}

MicrogridScenario demo_plant(std::string id, int horizon) {
  MicrogridScenario s;
  s.id = std::move(id);
  s.time = {1.0, horizon};
  s.fluid = *find_fluid("Ethanol");
  s.collector = *find_collector(CollectorTech::ETC);
  s.collector.area = 30.0;
  s.orc.eta_cycle = 0.12;
  s.orc.eta_hx = 0.9;
  s.orc.x_min = 0.0;
  s.orc.x_max = 2.0;
  s.orc.z_min = 0.0;
  s.orc.z_max = 2.0 * s.fluid.dh_pump / s.fluid.dh_turbine;
  s.battery.eta_round = 0.95;
  s.battery.b_min = 0.0;
  s.battery.b_max = 5.0;
  s.battery.fade = 0.2;
  s.battery.throughput = 10000.0;
  s.battery.cost_cycle = 0.01;
  s.tariff.g_min = -20.0;
  s.tariff.g_max = 20.0;
  s.tariff.price_buy = constant(horizon, 0.25);
  s.tariff.price_sell = constant(horizon, 0.05);
  s.demand = household_demand(horizon, 1.5);
  s.irradiation = clear_sky_irradiation({}, horizon);
  s.production_cost = 0.04;
  return s;
}

}  // namespace orcgrid::profiles
