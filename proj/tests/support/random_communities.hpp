#pragma once

#include <random>
#include <string>
#include <vector>

#include "orcgrid/domain.hpp"
#include "orcgrid/tet.hpp"

namespace testgen {

/// Each participant either sells or buys per step; 15% of entries are
/// zero. Grid sell costs straddle zero; 30% of arcs get a finite cap.
struct RandomCommunity {
  orcgrid::tet::ImbalanceSet imb;
  orcgrid::TradeNetwork net;
};

inline RandomCommunity random_community(std::mt19937_64& rng, int n, int horizon) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RandomCommunity rc;
  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
  rc.imb.participants = ids;
  rc.imb.export_offer.assign(static_cast<std::size_t>(n), {});
  rc.imb.import_need.assign(static_cast<std::size_t>(n), {});
  for (int i = 0; i < n; ++i)
    for (int t = 0; t < horizon; ++t) {
      const double mag = u(rng) < 0.15 ? 0.0 : 5.0 * u(rng);
      const bool sells = u(rng) < 0.5;
      rc.imb.export_offer[static_cast<std::size_t>(i)].push_back(sells ? mag : 0.0);
      rc.imb.import_need[static_cast<std::size_t>(i)].push_back(sells ? 0.0 : mag);
    }
  rc.net = orcgrid::make_uniform_network(ids, horizon, 0.0, 0.0, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < horizon; ++t) {
      rc.net.grid_buy_cost[i][t] = 0.1 + 0.3 * u(rng);
      rc.net.grid_sell_cost[i][t] = -0.05 + 0.1 * u(rng);
    }
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int t = 0; t < horizon; ++t) rc.net.transmission_cost[i][j][t] = 0.2 * u(rng);
      if (u(rng) < 0.3) rc.net.f_max[i][j] = 3.0 * u(rng);
    }
  }
  return rc;
}

}  // namespace testgen
