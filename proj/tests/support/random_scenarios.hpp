#pragma once

#include <random>
#include <string>

#include "orcgrid/catalog.hpp"
#include "orcgrid/domain.hpp"
#include "orcgrid/profiles.hpp"

namespace testgen {

/// Valid scenarios with x_min = 0, drawn from wide parameter ranges.
class ScenarioGenerator {
 public:
  explicit ScenarioGenerator(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

  orcgrid::MicrogridScenario scenario(int horizon, const std::string& id = "rand") {
    using namespace orcgrid;
    const auto& cat = builtin_catalog();
    MicrogridScenario s;
    s.id = id;
    s.time = {coin(0.8) ? 1.0 : 0.5, horizon};
    s.fluid = cat.fluids[static_cast<std::size_t>(integer(0, 8))];
    s.collector = cat.collectors[static_cast<std::size_t>(integer(0, 4))];
    s.collector.area = uniform(5.0, 40.0);
    s.orc.eta_cycle = uniform(0.06, 0.2);
    s.orc.eta_hx = uniform(0.7, 1.0);
    s.orc.x_min = 0.0;
    s.orc.x_max = 0.5 * integer(1, 9);
    const double ratio = s.fluid.dh_pump / s.fluid.dh_turbine;
    s.orc.z_min = 0.0;
    s.orc.z_max = s.orc.x_max * ratio * uniform(0.8, 1.5);
    if (coin(0.3)) s.orc.section_area_max = uniform(0.5, 2.0) * section_area_guess(s);
    s.battery.eta_round = uniform(0.8, 1.0);
    s.battery.b_max = coin(0.1) ? 0.0 : uniform(0.5, 10.0);
    s.battery.b_min = coin(0.2) ? uniform(0.0, 0.2) * s.battery.b_max : 0.0;
    s.battery.fade = uniform(0.0, 0.3);
    s.battery.throughput = uniform(20.0, 5000.0);
    s.battery.cost_cycle = uniform(0.0, 0.05);
    s.tariff.g_min = -uniform(s.battery.b_max, s.battery.b_max + 10.0);
    s.tariff.g_max = uniform(s.orc.x_max + 0.5, 25.0) + s.battery.b_max;
    for (int t = 0; t < horizon; ++t) {
      const double buy = uniform(0.05, 0.4);
      s.tariff.price_buy.push_back(buy);
      s.tariff.price_sell.push_back(coin(0.2) ? 0.0 : uniform(0.0, buy));
      s.demand.push_back(coin(0.1) ? 0.0 : uniform(0.0, 3.0));
      s.irradiation.push_back(coin(0.3) ? 0.0 : uniform(0.0, 1.0));
    }
    s.production_cost = uniform(0.0, 0.15);
    return s;
  }

 private:
  static double section_area_guess(const orcgrid::MicrogridScenario& s) {
    return s.orc.x_max / (s.fluid.density * s.fluid.velocity * s.fluid.dh_turbine);
  }

  std::mt19937_64 rng_;
};

}  // namespace testgen
