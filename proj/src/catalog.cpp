#include "orcgrid/catalog.hpp"

namespace orcgrid {

namespace {

struct FluidRow {
  const char* name;
  double mw, tc, pc, cp, rho;
};

constexpr FluidRow kFluids[] = {
    {"Ethanol", 0.046, 240.8, 6.148, 2432, 0.253100481},
    {"Methanol", 0.032, 240.2, 8.104, 2512, 0.369822485},
    {"Cyclohexane", 0.084, 280.5, 4.075, 154.37, 0.632911392},
    {"R134a", 0.102, 101, 4.059, 1268, 0.8838},
    {"R141b", 0.11695, 204.2, 4.249, 895, 0.195},
    {"RC318", 0.2, 115.2, 2.778, 898, 0.028},
    {"R114", 0.17, 145.7, 3.289, 845, 0.05},
    {"R113", 0.187, 214.1, 3.439, 867, 0.215},
    {"R32", 0.052, 78.11, 5.784, 848, 0.011},
};

Catalog make_catalog() {
  const auto& d = catalog_cycle_defaults();
  Catalog c;
  for (const auto& row : kFluids) {
    FluidProperties f;
    f.name = row.name;
    f.molecular_weight = row.mw;
    f.t_crit = row.tc;
    f.p_crit = row.pc;
    f.cp = row.cp;
    f.density = row.rho;
    f.velocity = d.velocity;
    const auto dh = enthalpy_drops_from_temperatures(row.cp, d.dt_turbine, d.eta_turbine,
                                                     d.dt_pump, d.eta_pump);
    f.dh_turbine = dh.dh_turbine;
    f.dh_pump = dh.dh_pump;
    c.fluids.push_back(f);
  }
  c.collectors = {
      {CollectorTech::FPC, 0.65, d.collector_area},
      {CollectorTech::ETC, 0.87, d.collector_area},
      {CollectorTech::CPC, 0.65, d.collector_area},
      {CollectorTech::PTC, 0.85, d.collector_area},
      {CollectorTech::LFR, 0.66, d.collector_area},
  };
  for (int k = 1; k <= 9; ++k) c.sizes_kw.push_back(0.5 * k);
  return c;
}

}  // namespace

const CatalogCycleDefaults& catalog_cycle_defaults() {
  static const CatalogCycleDefaults defaults;
  return defaults;
}

const Catalog& builtin_catalog() {
  static const Catalog catalog = make_catalog();
  return catalog;
}

std::optional<FluidProperties> find_fluid(std::string_view name) {
  for (const auto& f : builtin_catalog().fluids)
    if (f.name == name) return f;
  return std::nullopt;
}

std::optional<CollectorSpec> find_collector(CollectorTech tech) {
  for (const auto& c : builtin_catalog().collectors)
    if (c.technology == tech) return c;
  return std::nullopt;
}

}  // namespace orcgrid
