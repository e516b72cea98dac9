#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "orcgrid/domain.hpp"

namespace orcgrid {

/// Temperature lifts and efficiencies used to derive catalog enthalpy drops.
struct CatalogCycleDefaults {
  double dt_turbine = 50.0;  // degC
  double eta_turbine = 0.8;
  double dt_pump = 2.0;      // degC
  double eta_pump = 0.7;
  double velocity = 2.0;     // m/s
  double collector_area = 20.0;  // m2, template value only
};

struct Catalog {
  std::vector<FluidProperties> fluids;
  std::vector<CollectorSpec> collectors;
  std::vector<double> sizes_kw;
};

[[nodiscard]] const CatalogCycleDefaults& catalog_cycle_defaults();
[[nodiscard]] const Catalog& builtin_catalog();

[[nodiscard]] std::optional<FluidProperties> find_fluid(std::string_view name);
[[nodiscard]] std::optional<CollectorSpec> find_collector(CollectorTech tech);

}  // namespace orcgrid
