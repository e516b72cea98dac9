#pragma once

#include <algorithm>
#include <limits>

#include "oracles/model_to_dense.hpp"
#include "orcgrid/sorc.hpp"

namespace oracle {

/// Best objective over all 2^T battery-mode patterns, each relaxation
/// solved by the dense tableau.
inline double enumerate_battery_modes(const orcgrid::sorc::SorcModel& built) {
  const auto& v = built.map;
  const int horizon = static_cast<int>(v.y_in.size());
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 0; mask < (1 << horizon); ++mask) {
    std::map<int, double> pins;
    for (int t = 0; t < horizon; ++t) {
      const double charge_mode = (mask >> t) & 1;
      pins[v.y_in[static_cast<std::size_t>(t)]] = charge_mode;
      pins[v.y_out[static_cast<std::size_t>(t)]] = 1.0 - charge_mode;
    }
    const auto r = solve_dense(to_dense(built.model, pins));
    if (r.status == TableauStatus::Optimal) best = std::min(best, r.objective);
  }
  return best;
}

}  // namespace oracle
