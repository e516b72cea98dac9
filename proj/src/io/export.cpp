#include "orcgrid/io/export.hpp"

#include <cmath>
#include <fstream>
#include <system_error>

#include <fmt/format.h>

#include "json.hpp"

namespace orcgrid::io {

using nlohmann::json;

std::string format_number(double value) {
  if (!std::isfinite(value)) return "";
  if (value == 0.0) return "0";
  return fmt::format("{:.9g}", value);
}

namespace {

/// Same rounding as the CSVs; null for non-finite values.
json num(double value) {
  if (!std::isfinite(value)) return nullptr;
  if (value == 0.0) return 0.0;
  return std::stod(fmt::format("{:.9g}", value));
}

std::string row(std::initializer_list<std::string> fields) {
  std::string out;
  for (const auto& f : fields) {
    if (!out.empty()) out += ',';
    out += f;
  }
  return out + '\n';
}

std::string n(double v) { return format_number(v); }

std::string field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) out += c == '"' ? std::string("\"\"") : std::string(1, c == '\n' ? ' ' : c);
  return out + '"';
}

std::string suffixed(const std::string& stem, const std::string& id, bool single) {
  return single ? stem + ".csv" : fmt::format("{}_{}.csv", stem, id);
}

std::string production_grid_csv(const MicrogridScenario& s, const sorc::SorcSchedule& sched) {
  std::string out = row({"step", "x_kw", "g_kw", "grid_import_kwh", "grid_export_kwh", "demand_kwh"});
  for (std::size_t t = 0; t < sched.steps.size(); ++t) {
    const auto& st = sched.steps[t];
    out += row({std::to_string(t + 1), n(st.production_kw), n(st.net_grid), n(st.grid_import),
                n(st.grid_export), n(s.demand[t])});
  }
  return out;
}

std::string battery_csv(const sorc::SorcSchedule& sched) {
  const double dt = sched.step_hours;
  std::string out = row({"step", "soc_kwh", "charge_kwh", "discharge_kwh", "cap_kwh"});
  for (std::size_t t = 0; t < sched.steps.size(); ++t) {
    const auto& st = sched.steps[t];
    out += row({std::to_string(t + 1), n(st.soc), n(dt * st.charge), n(dt * st.discharge),
                n(st.cap_available)});
  }
  return out;
}

json stats_json(const milp::SolveStats& stats) {
  return {{"nodes", stats.nodes}, {"lp_iterations", stats.lp_iterations}};
}

json prosumer_json(const MicrogridScenario& s, const sorc::SorcSchedule& sched) {
  const auto k = tet::prosumer_kpi(s, sched);
  return {{"id", s.id},
          {"status", std::string(milp::to_string(sched.status))},
          {"objective", num(sched.total_cost)},
          {"bound", num(sched.bound)},
          {"gap", num(sched.gap)},
          {"market_cost", num(k.market_cost)},
          {"local_cost", num(k.local_cost)},
          {"no_orc_cost", num(k.no_orc_cost)},
          {"savings_vs_no_orc", num(tet::relative_savings(k.no_orc_cost, k.prosumer_cost))},
          {"grid_import_kwh", num(k.grid_import_kwh)},
          {"grid_export_kwh", num(k.grid_export_kwh)},
          {"peak_mass_flow_kg_s", num(sorc::mass_flow_report(sched, s.fluid).peak)},
          {"stats", stats_json(sched.stats)}};
}

json community_json(const tet::KpiReport& k, const tet::TradeClearing& c) {
  return {{"local_cost", num(k.local_cost)},
          {"trading_cost", num(k.trading_cost)},
          {"grid_only_trading_cost", num(k.grid_only_trading_cost)},
          {"trading_gain", num(k.trading_gain)},
          {"trading_savings", num(k.trading_savings)},
          {"community_cost", num(k.community_cost)},
          {"no_orc_cost", num(k.no_orc_cost)},
          {"savings_vs_no_orc", num(k.savings_vs_no_orc)},
          {"p2p_volume_kwh", num(k.p2p_volume_kwh)},
          {"clearing_stats", stats_json(c.stats)}};
}

std::string community_costs_csv(const tet::KpiReport& k) {
  std::string out = row({"id", "prosumer_cost", "local_cost", "market_cost", "no_orc_cost"});
  for (const auto& p : k.prosumers)
    out += row({field(p.id), n(p.prosumer_cost), n(p.local_cost), n(p.market_cost), n(p.no_orc_cost)});
  return out;
}

std::string optional_metric(sweeps::Metric m, const sweeps::SweepRow& r) {
  return r.schedule ? n(sweeps::compute_metric(m, r.scenario, *r.schedule)) : "";
}

void add_sweep_files(const sweeps::SweepTable& table, FileSet& files) {
  using sweeps::Metric;
  std::string header = "label";
  for (auto m : table.outputs) header += fmt::format(",{}", sweeps::to_string(m));
  std::string out = header + ",error\n";
  for (const auto& r : table.rows) {
    out += field(r.label);
    for (std::size_t k = 0; k < table.outputs.size(); ++k)
      out += ',' + (k < r.metrics.size() ? n(r.metrics[k]) : std::string());
    out += ',' + field(r.error);
    out += '\n';
  }
  files.emplace_back("sweep.csv", std::move(out));

  std::string plot;
  switch (table.axis) {
    case sweeps::Axis::Fluid:
      plot = row({"fluid", "peak_mass_flow_kg_s"});
      for (const auto& r : table.rows)
        plot += row({field(r.label), optional_metric(Metric::PeakMassFlow, r)});
      files.emplace_back("plot_fluid_mass_flow.csv", std::move(plot));
      break;
    case sweeps::Axis::Size:
      plot = row({"size_kw", "objective", "grid_import_kwh"});
      for (const auto& r : table.rows)
        plot += row({n(r.scenario.orc.x_max), optional_metric(Metric::Objective, r),
                     optional_metric(Metric::GridImportTotal, r)});
      files.emplace_back("plot_size_objective.csv", std::move(plot));
      break;
    case sweeps::Axis::Collector:
      plot = row({"technology", "efficiency", "required_collector_area_m2", "peak_mass_flow_kg_s"});
      for (const auto& r : table.rows)
        plot += row({field(r.label), n(r.scenario.collector.efficiency),
                     optional_metric(Metric::RequiredCollectorArea, r),
                     optional_metric(Metric::PeakMassFlow, r)});
      files.emplace_back("plot_collector_sizing.csv", std::move(plot));
      break;
    case sweeps::Axis::Weather:
      break;
  }
}

std::string locations_csv(const std::vector<sweeps::LocationRow>& rows) {
  std::string out = row({"label", "objective", "baseline", "savings"});
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      out += row({field(r.label), "", "", ""});
      continue;
    }
    out += row({field(r.label), n(r.objective), n(r.baseline), n(r.savings)});
  }
  return out;
}

}  // namespace

std::string schedule_csv(const MicrogridScenario& s, const sorc::SorcSchedule& sched) {
  const double dt = sched.step_hours;
  const auto flow = sorc::mass_flow_report(sched, s.fluid);
  std::string out = row({"step", "x_kw", "z_kw", "g_kw", "q_solar_kw", "q_in_kw", "m_kg_s",
                         "soc_kwh", "charge_kwh", "discharge_kwh", "e_in_kwh", "e_out_kwh"});
  for (std::size_t t = 0; t < sched.steps.size(); ++t) {
    const auto& st = sched.steps[t];
    out += row({std::to_string(t + 1), n(st.production_kw), n(st.pump_kw), n(st.net_grid),
                n(st.solar_thermal), n(st.hx_thermal), n(flow.per_step[t]), n(st.soc),
                n(dt * st.charge), n(dt * st.discharge), n(st.grid_import), n(st.grid_export)});
  }
  return out;
}

std::string trades_csv(const tet::TradeClearing& clearing, const TradeNetwork& net) {
  auto name = [&](int idx) {
    return idx == tet::kGrid ? std::string("grid") : clearing.participants[static_cast<std::size_t>(idx)];
  };
  std::string out = row({"step", "seller", "buyer", "kwh", "cost"});
  for (const auto& tr : clearing.trades(net))
    out += row({std::to_string(tr.step + 1), field(name(tr.seller)), field(name(tr.buyer)), n(tr.kwh), n(tr.cost)});
  return out;
}

std::string catalog_text(const Catalog& c) {
  std::string out = fmt::format("# working fluids ({})\n", c.fluids.size());
  out += row({"name", "molecular_weight_kg_mol", "t_crit_c", "p_crit_mpa", "cp_j_kg_c", "density",
              "velocity_m_s", "dh_turbine_kj_kg", "dh_pump_kj_kg"});
  for (const auto& f : c.fluids)
    out += row({field(f.name), n(f.molecular_weight), n(f.t_crit), n(f.p_crit), n(f.cp),
                n(f.density), n(f.velocity), n(f.dh_turbine), n(f.dh_pump)});
  out += fmt::format("\n# orc sizes ({})\nsize_kw\n", c.sizes_kw.size());
  for (double size : c.sizes_kw) out += n(size) + '\n';
  out += fmt::format("\n# solar collectors ({})\n", c.collectors.size());
  out += row({"technology", "efficiency_pct"});
  for (const auto& col : c.collectors)
    out += row({std::string(to_string(col.technology)), n(100.0 * col.efficiency)});
  return out;
}

FileSet render_results(const ResultBundle& b) {
  if (b.schedules.size() != b.scenarios.size())
    throw std::invalid_argument("bundle needs one schedule per scenario");
  FileSet files;
  const bool single = b.scenarios.size() == 1 && !b.clearing;
  for (std::size_t p = 0; p < b.scenarios.size(); ++p) {
    const auto& s = b.scenarios[p];
    files.emplace_back(suffixed("schedule", s.id, single), schedule_csv(s, b.schedules[p]));
  }
  if (!b.sweep && b.locations.empty()) {
    if (b.clearing && b.network) {
      files.emplace_back("trades.csv", trades_csv(*b.clearing, *b.network));
    } else {
      files.emplace_back("trades.csv", row({"step", "seller", "buyer", "kwh", "cost"}));
    }
  }
  for (std::size_t p = 0; p < b.scenarios.size(); ++p) {
    const auto& s = b.scenarios[p];
    files.emplace_back(suffixed("plot_production_grid", s.id, single),
                       production_grid_csv(s, b.schedules[p]));
    files.emplace_back(suffixed("plot_battery", s.id, single), battery_csv(b.schedules[p]));
  }
  if (b.kpi) files.emplace_back("plot_community_costs.csv", community_costs_csv(*b.kpi));
  if (b.sweep) add_sweep_files(*b.sweep, files);
  if (!b.locations.empty()) files.emplace_back("plot_location_objective.csv", locations_csv(b.locations));

  json kpi;
  kpi["tool"] = {{"name", "orcgrid"}, {"version", b.tool_version}};
  kpi["input_digest"] = b.input_digest;
  kpi["currency_label"] = b.currency_label ? json(*b.currency_label) : json(nullptr);
  kpi["degradation"] = b.degradation == sorc::DegradationMode::LiteralFactor ? "literal_factor"
                                                                            : "remaining_capacity";
  json prosumers = json::array();
  milp::SolveStats total;
  for (std::size_t p = 0; p < b.scenarios.size(); ++p) {
    prosumers.push_back(prosumer_json(b.scenarios[p], b.schedules[p]));
    total.nodes += b.schedules[p].stats.nodes;
    total.lp_iterations += b.schedules[p].stats.lp_iterations;
  }
  kpi["prosumers"] = std::move(prosumers);
  if (b.kpi && b.clearing) {
    kpi["community"] = community_json(*b.kpi, *b.clearing);
    total.nodes += b.clearing->stats.nodes;
    total.lp_iterations += b.clearing->stats.lp_iterations;
  }
  if (b.sweep) {
    json rows = json::array();
    for (const auto& r : b.sweep->rows) {
      json jr = {{"label", r.label}};
      for (std::size_t k = 0; k < b.sweep->outputs.size() && k < r.metrics.size(); ++k)
        jr[std::string(sweeps::to_string(b.sweep->outputs[k]))] = num(r.metrics[k]);
      if (!r.error.empty()) jr["error"] = r.error;
      if (r.schedule) {
        total.nodes += r.schedule->stats.nodes;
        total.lp_iterations += r.schedule->stats.lp_iterations;
      }
      rows.push_back(std::move(jr));
    }
    kpi["sweep"] = {{"axis", std::string(sweeps::to_string(b.sweep->axis))}, {"rows", rows}};
  }
  if (!b.locations.empty()) {
    json rows = json::array();
    for (const auto& r : b.locations) {
      json jr = {{"label", r.label}};
      if (r.error.empty()) {
        jr["objective"] = num(r.objective);
        jr["baseline"] = num(r.baseline);
        jr["savings"] = num(r.savings);
      } else {
        jr["error"] = r.error;
      }
      rows.push_back(std::move(jr));
    }
    kpi["locations"] = std::move(rows);
  }
  kpi["stats"] = stats_json(total);
  files.emplace_back("kpi.json", kpi.dump(2) + "\n");
  return files;
}

std::vector<std::filesystem::path> export_results(const ResultBundle& bundle,
                                                  const std::filesystem::path& dir) {
  const auto files = render_results(bundle);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ExportError(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : files) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) throw ExportError(fmt::format("cannot write '{}'", path.string()));
    written.push_back(path);
  }
  return written;
}

}  // namespace orcgrid::io
