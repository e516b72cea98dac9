#include "orcgrid/io/scenario_file.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "json.hpp"
#include "orcgrid/catalog.hpp"
#include "orcgrid/profiles.hpp"

namespace orcgrid::io {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string child(const std::string& ptr, std::string_view key) {
  return fmt::format("{}/{}", ptr, key);
}
std::string child(const std::string& ptr, std::size_t index) {
  return fmt::format("{}/{}", ptr, index);
}

void expect_object(const json& j, const std::string& ptr,
                   std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw InputError(ptr.empty() ? "/" : ptr, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw InputError(child(ptr, key), "unknown field '" + key + "'");
  }
}

const json& require(const json& obj, std::string_view key, const std::string& ptr) {
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) throw InputError(child(ptr, key), "missing required field");
  return *it;
}

double number(const json& j, const std::string& ptr) {
  if (!j.is_number()) throw InputError(ptr, "expected a number");
  return j.get<double>();
}

double number_or(const json& obj, std::string_view key, const std::string& ptr, double fallback) {
  const auto it = obj.find(std::string(key));
  return it == obj.end() ? fallback : number(*it, child(ptr, key));
}

std::string text(const json& j, const std::string& ptr) {
  if (!j.is_string()) throw InputError(ptr, "expected a string");
  return j.get<std::string>();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    const auto b = field.find_first_not_of(" \t");
    const auto e = field.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

class SeriesReader {
 public:
  explicit SeriesReader(std::filesystem::path base) : base_(std::move(base)) {}

  std::vector<double> read(const json& j, const std::string& ptr, int horizon) {
    const auto n = static_cast<std::size_t>(horizon);
    if (j.is_number()) return std::vector<double>(n, j.get<double>());
    if (j.is_array()) {
      std::vector<double> out;
      for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], child(ptr, k)));
      return out;
    }
    if (j.is_object()) {
      expect_object(j, ptr, {"csv", "column"});
      const auto path = text(require(j, "csv", ptr), child(ptr, "csv"));
      const auto column = text(require(j, "column", ptr), child(ptr, "column"));
      return from_csv(path, column, ptr, horizon);
    }
    throw InputError(ptr, "expected a number, an array or a {\"csv\", \"column\"} reference");
  }

 private:
  struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
  };

  const Table& table(const std::string& rel, const std::string& ptr, int horizon) {
    const auto full = (base_ / rel).lexically_normal();
    const auto key = full.string();
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::ifstream in(full, std::ios::binary);
    if (!in) throw InputError(ptr, fmt::format("cannot read CSV file '{}'", key));
    Table t;
    std::string line;
    int line_no = 0;
    int expected_step = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const std::string where = fmt::format("{}:{}", rel, line_no);
      if (line_no == 1) {
        t.header = split_csv_line(line);
        if (t.header.empty() || t.header[0] != "step")
          throw InputError(where, "first header column must be 'step'");
        t.columns.assign(t.header.size() - 1, {});
        continue;
      }
      if (line.empty()) continue;
      const auto fields = split_csv_line(line);
      if (fields.size() != t.header.size())
        throw InputError(where, fmt::format("expected {} fields, found {}", t.header.size(),
                                            fields.size()));
      double step = 0.0;
      if (!parse_double(fields[0], step) || step != expected_step)
        throw InputError(where, fmt::format("expected step {}, found '{}'", expected_step,
                                            fields[0]));
      ++expected_step;
      for (std::size_t c = 1; c < fields.size(); ++c) {
        double v = 0.0;
        if (!parse_double(fields[c], v))
          throw InputError(where, fmt::format("column '{}' holds '{}', not a number",
                                              t.header[c], fields[c]));
        t.columns[c - 1].push_back(v);
      }
    }
    if (line_no == 0) throw InputError(fmt::format("{}:1", rel), "empty CSV file");
    if (expected_step - 1 != horizon)
      throw InputError(fmt::format("{}:{}", rel, line_no),
                       fmt::format("{} data rows, horizon is {}", expected_step - 1, horizon));
    return cache_.emplace(key, std::move(t)).first->second;
  }

  std::vector<double> from_csv(const std::string& rel, const std::string& column,
                               const std::string& ptr, int horizon) {
    const Table& t = table(rel, ptr, horizon);
    for (std::size_t c = 1; c < t.header.size(); ++c)
      if (t.header[c] == column) return t.columns[c - 1];
    throw InputError(child(ptr, "column"), fmt::format("column '{}' not found in '{}'", column, rel));
  }

  std::filesystem::path base_;
  std::map<std::string, Table> cache_;
};

FluidProperties parse_fluid(const json& j, const std::string& ptr) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (auto f = find_fluid(name)) return *f;
    throw InputError(ptr, fmt::format("unknown catalog fluid '{}'", name));
  }
  expect_object(j, ptr, {"name", "molecular_weight", "t_crit", "p_crit", "cp", "density",
                         "velocity", "dh_turbine", "dh_pump", "dt_turbine", "eta_turbine",
                         "dt_pump", "eta_pump"});
  FluidProperties f;
  f.name = text(require(j, "name", ptr), child(ptr, "name"));
  f.molecular_weight = number_or(j, "molecular_weight", ptr, 0.0);
  f.t_crit = number_or(j, "t_crit", ptr, 0.0);
  f.p_crit = number_or(j, "p_crit", ptr, 0.0);
  f.cp = number_or(j, "cp", ptr, 0.0);
  f.density = number(require(j, "density", ptr), child(ptr, "density"));
  f.velocity = number(require(j, "velocity", ptr), child(ptr, "velocity"));
  const bool direct = j.contains("dh_turbine") || j.contains("dh_pump");
  const bool lifts = j.contains("dt_turbine") || j.contains("eta_turbine") ||
                     j.contains("dt_pump") || j.contains("eta_pump");
  if (direct && lifts)
    throw InputError(ptr, "give either dh_turbine/dh_pump or temperature lifts, not both");
  if (lifts) {
    const auto dh = enthalpy_drops_from_temperatures(
        f.cp, number(require(j, "dt_turbine", ptr), child(ptr, "dt_turbine")),
        number(require(j, "eta_turbine", ptr), child(ptr, "eta_turbine")),
        number(require(j, "dt_pump", ptr), child(ptr, "dt_pump")),
        number(require(j, "eta_pump", ptr), child(ptr, "eta_pump")));
    f.dh_turbine = dh.dh_turbine;
    f.dh_pump = dh.dh_pump;
  } else {
    f.dh_turbine = number(require(j, "dh_turbine", ptr), child(ptr, "dh_turbine"));
    f.dh_pump = number(require(j, "dh_pump", ptr), child(ptr, "dh_pump"));
  }
  return f;
}

CollectorSpec parse_collector(const json& j, const std::string& ptr) {
  expect_object(j, ptr, {"technology", "efficiency", "area"});
  CollectorSpec c;
  const auto tech_ptr = child(ptr, "technology");
  const auto tech = parse_collector_tech(text(require(j, "technology", ptr), tech_ptr));
  if (!tech) throw InputError(tech_ptr, "technology must be one of FPC, ETC, CPC, PTC, LFR, Custom");
  c.technology = *tech;
  if (j.contains("efficiency")) {
    c.efficiency = number(j["efficiency"], child(ptr, "efficiency"));
  } else if (auto from_catalog = find_collector(*tech)) {
    c.efficiency = from_catalog->efficiency;
  } else {
    throw InputError(child(ptr, "efficiency"), "missing required field for a Custom collector");
  }
  c.area = number(require(j, "area", ptr), child(ptr, "area"));
  return c;
}

OrcSpec parse_orc(const json& j, const std::string& ptr) {
  expect_object(j, ptr, {"eta_cycle", "eta_hx", "x_min", "x_max", "z_min", "z_max",
                         "section_area_max"});
  OrcSpec o;
  o.eta_cycle = number(require(j, "eta_cycle", ptr), child(ptr, "eta_cycle"));
  o.eta_hx = number(require(j, "eta_hx", ptr), child(ptr, "eta_hx"));
  o.x_min = number_or(j, "x_min", ptr, 0.0);
  o.x_max = number(require(j, "x_max", ptr), child(ptr, "x_max"));
  o.z_min = number_or(j, "z_min", ptr, 0.0);
  o.z_max = number(require(j, "z_max", ptr), child(ptr, "z_max"));
  if (j.contains("section_area_max") && !j["section_area_max"].is_null())
    o.section_area_max = number(j["section_area_max"], child(ptr, "section_area_max"));
  return o;
}

BatterySpec parse_battery(const json& j, const std::string& ptr) {
  expect_object(j, ptr, {"eta_round", "b_min", "b_max", "fade", "throughput", "cost_cycle"});
  BatterySpec b;
  b.eta_round = number(require(j, "eta_round", ptr), child(ptr, "eta_round"));
  b.b_min = number_or(j, "b_min", ptr, 0.0);
  b.b_max = number(require(j, "b_max", ptr), child(ptr, "b_max"));
  b.fade = number_or(j, "fade", ptr, 0.0);
  b.throughput = number(require(j, "throughput", ptr), child(ptr, "throughput"));
  b.cost_cycle = number_or(j, "cost_cycle", ptr, 0.0);
  return b;
}

MicrogridScenario parse_prosumer(const json& j, const std::string& ptr, const TimeGrid& time,
                                 SeriesReader& series) {
  expect_object(j, ptr, {"id", "fluid", "collector", "orc", "battery", "tariff", "demand",
                         "irradiation", "production_cost"});
  MicrogridScenario s;
  s.id = text(require(j, "id", ptr), child(ptr, "id"));
  s.time = time;
  s.fluid = parse_fluid(require(j, "fluid", ptr), child(ptr, "fluid"));
  s.collector = parse_collector(require(j, "collector", ptr), child(ptr, "collector"));
  s.orc = parse_orc(require(j, "orc", ptr), child(ptr, "orc"));
  s.battery = parse_battery(require(j, "battery", ptr), child(ptr, "battery"));
  const auto tptr = child(ptr, "tariff");
  const json& tj = require(j, "tariff", ptr);
  expect_object(tj, tptr, {"g_min", "g_max", "price_buy", "price_sell"});
  s.tariff.g_min = number(require(tj, "g_min", tptr), child(tptr, "g_min"));
  s.tariff.g_max = number(require(tj, "g_max", tptr), child(tptr, "g_max"));
  s.tariff.price_buy = series.read(require(tj, "price_buy", tptr), child(tptr, "price_buy"),
                                   time.horizon);
  s.tariff.price_sell = series.read(require(tj, "price_sell", tptr), child(tptr, "price_sell"),
                                    time.horizon);
  s.demand = series.read(require(j, "demand", ptr), child(ptr, "demand"), time.horizon);
  s.irradiation =
      series.read(require(j, "irradiation", ptr), child(ptr, "irradiation"), time.horizon);
  s.production_cost = number(require(j, "production_cost", ptr), child(ptr, "production_cost"));
  return s;
}

double bound_value(const json& j, const std::string& ptr, bool null_is_inf) {
  if (j.is_null() && null_is_inf) return kInf;
  return number(j, ptr);
}

std::vector<std::vector<double>> parse_pair_matrix(const json& j, const std::string& ptr,
                                                   std::size_t n, bool null_is_inf) {
  if (!j.is_array()) {
    const double v = bound_value(j, ptr, null_is_inf);
    return std::vector<std::vector<double>>(n, std::vector<double>(n, v));
  }
  if (j.size() != n) throw InputError(ptr, fmt::format("expected {} rows", n));
  std::vector<std::vector<double>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto rptr = child(ptr, i);
    if (!j[i].is_array() || j[i].size() != n)
      throw InputError(rptr, fmt::format("expected an array of {} entries", n));
    for (std::size_t k = 0; k < n; ++k) {
      const auto& e = j[i][k];
      out[i].push_back(i == k && e.is_null() ? (null_is_inf ? kInf : 0.0)
                                             : bound_value(e, child(rptr, k), null_is_inf));
    }
  }
  return out;
}

TradeNetwork parse_network(const json& j, const std::string& ptr,
                           const std::vector<std::string>& ids, int horizon,
                           SeriesReader& series) {
  expect_object(j, ptr, {"participants", "transmission_cost", "f_min", "f_max", "grid_buy_cost",
                         "grid_sell_cost"});
  TradeNetwork net;
  net.participants = ids;
  if (j.contains("participants")) {
    std::vector<std::string> given;
    const auto pptr = child(ptr, "participants");
    if (!j["participants"].is_array()) throw InputError(pptr, "expected an array of ids");
    for (std::size_t k = 0; k < j["participants"].size(); ++k)
      given.push_back(text(j["participants"][k], child(pptr, k)));
    if (given != ids) throw InputError(pptr, "participants must list the prosumer ids in order");
  }
  const std::size_t n = ids.size();
  const auto un = static_cast<std::size_t>(horizon);

  const auto cptr = child(ptr, "transmission_cost");
  const json& cost = require(j, "transmission_cost", ptr);
  net.transmission_cost.assign(n, std::vector<std::vector<double>>(n));
  if (cost.is_array()) {
    if (cost.size() != n) throw InputError(cptr, fmt::format("expected {} rows", n));
    for (std::size_t i = 0; i < n; ++i) {
      const auto rptr = child(cptr, i);
      if (!cost[i].is_array() || cost[i].size() != n)
        throw InputError(rptr, fmt::format("expected an array of {} entries", n));
      for (std::size_t k = 0; k < n; ++k) {
        const auto& e = cost[i][k];
        net.transmission_cost[i][k] = (i == k && e.is_null())
                                          ? std::vector<double>(un, 0.0)
                                          : series.read(e, child(rptr, k), horizon);
      }
    }
  } else {
    const auto s = series.read(cost, cptr, horizon);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) net.transmission_cost[i][k] = i == k ? std::vector<double>(un, 0.0) : s;
  }

  net.f_min = j.contains("f_min") ? parse_pair_matrix(j["f_min"], child(ptr, "f_min"), n, false)
                                  : std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0));
  net.f_max = j.contains("f_max") ? parse_pair_matrix(j["f_max"], child(ptr, "f_max"), n, true)
                                  : std::vector<std::vector<double>>(n, std::vector<double>(n, kInf));

  auto per_participant = [&](std::string_view key) {
    const auto kptr = child(ptr, key);
    const json& v = require(j, key, ptr);
    std::vector<std::vector<double>> out;
    if (v.is_array()) {
      if (v.size() != n) throw InputError(kptr, fmt::format("expected one entry per participant ({})", n));
      for (std::size_t i = 0; i < n; ++i) out.push_back(series.read(v[i], child(kptr, i), horizon));
    } else {
      out.assign(n, series.read(v, kptr, horizon));
    }
    return out;
  };
  net.grid_buy_cost = per_participant("grid_buy_cost");
  net.grid_sell_cost = per_participant("grid_sell_cost");
  return net;
}

json series_json(const std::vector<double>& s) { return json(s); }

json fluid_json(const FluidProperties& f) {
  return {{"name", f.name},         {"molecular_weight", f.molecular_weight},
          {"t_crit", f.t_crit},     {"p_crit", f.p_crit},
          {"cp", f.cp},             {"density", f.density},
          {"velocity", f.velocity}, {"dh_turbine", f.dh_turbine},
          {"dh_pump", f.dh_pump}};
}

json bound_json(double v) { return std::isinf(v) ? json(nullptr) : json(v); }

json prosumer_json(const MicrogridScenario& s) {
  json orc = {{"eta_cycle", s.orc.eta_cycle}, {"eta_hx", s.orc.eta_hx}, {"x_min", s.orc.x_min},
              {"x_max", s.orc.x_max},         {"z_min", s.orc.z_min},   {"z_max", s.orc.z_max}};
  if (s.orc.section_area_max) orc["section_area_max"] = *s.orc.section_area_max;
  return {
      {"id", s.id},
      {"fluid", fluid_json(s.fluid)},
      {"collector",
       {{"technology", std::string(to_string(s.collector.technology))},
        {"efficiency", s.collector.efficiency},
        {"area", s.collector.area}}},
      {"orc", orc},
      {"battery",
       {{"eta_round", s.battery.eta_round},
        {"b_min", s.battery.b_min},
        {"b_max", s.battery.b_max},
        {"fade", s.battery.fade},
        {"throughput", s.battery.throughput},
        {"cost_cycle", s.battery.cost_cycle}}},
      {"tariff",
       {{"g_min", s.tariff.g_min},
        {"g_max", s.tariff.g_max},
        {"price_buy", series_json(s.tariff.price_buy)},
        {"price_sell", series_json(s.tariff.price_sell)}}},
      {"demand", series_json(s.demand)},
      {"irradiation", series_json(s.irradiation)},
      {"production_cost", s.production_cost},
  };
}

json network_json(const TradeNetwork& net) {
  json f_min = json::array(), f_max = json::array(), cost = json::array();
  for (int i = 0; i < net.size(); ++i) {
    json a = json::array(), b = json::array(), c = json::array();
    for (int k = 0; k < net.size(); ++k) {
      a.push_back(net.f_min[i][k]);
      b.push_back(bound_json(net.f_max[i][k]));
      c.push_back(series_json(net.transmission_cost[i][k]));
    }
    f_min.push_back(a);
    f_max.push_back(b);
    cost.push_back(c);
  }
  json buy = json::array(), sell = json::array();
  for (int i = 0; i < net.size(); ++i) {
    buy.push_back(series_json(net.grid_buy_cost[i]));
    sell.push_back(series_json(net.grid_sell_cost[i]));
  }
  return {{"participants", net.participants}, {"f_min", f_min}, {"f_max", f_max},
          {"transmission_cost", cost},        {"grid_buy_cost", buy},
          {"grid_sell_cost", sell}};
}

json parse_json_text(std::string_view text_in, const std::string& label) {
  try {
    return json::parse(text_in);
  } catch (const json::parse_error& e) {
    throw InputError(label, fmt::format("malformed JSON ({})", e.what()));
  }
}

ScenarioDocument parse_document(const json& root, const std::filesystem::path& base_dir) {
  expect_object(root, "", {"version", "currency_label", "time", "prosumers", "network"});
  ScenarioDocument doc;
  const json& version = require(root, "version", "");
  if (!version.is_number_integer()) throw InputError("/version", "expected an integer");
  doc.version = version.get<int>();
  if (doc.version != kSchemaVersion)
    throw InputError("/version", fmt::format("unsupported version {} (expected {})", doc.version,
                                             kSchemaVersion));
  if (root.contains("currency_label"))
    doc.currency_label = text(root["currency_label"], "/currency_label");

  const json& tj = require(root, "time", "");
  expect_object(tj, "/time", {"step_hours", "horizon"});
  TimeGrid time;
  time.step_hours = number_or(tj, "step_hours", "/time", 1.0);
  const json& hj = require(tj, "horizon", "/time");
  if (!hj.is_number_integer()) throw InputError("/time/horizon", "expected an integer");
  time.horizon = hj.get<int>();
  if (time.horizon < 1 || time.horizon > 100000)
    throw InputError("/time/horizon", "horizon must be in [1, 100000]");

  SeriesReader series(base_dir);
  const json& pj = require(root, "prosumers", "");
  if (!pj.is_array() || pj.empty())
    throw InputError("/prosumers", "expected a non-empty array");
  std::vector<Violation> violations;
  for (std::size_t k = 0; k < pj.size(); ++k) {
    auto s = parse_prosumer(pj[k], child("/prosumers", k), time, series);
    for (auto& v : check_scenario(s)) {
      v.message = fmt::format("prosumer '{}': {}", s.id, v.message);
      v.field = fmt::format("prosumers[{}].{}", k, v.field);
      violations.push_back(std::move(v));
    }
    doc.prosumers.push_back(std::move(s));
  }
  for (std::size_t a = 0; a < doc.prosumers.size(); ++a)
    for (std::size_t b = a + 1; b < doc.prosumers.size(); ++b)
      if (doc.prosumers[a].id == doc.prosumers[b].id)
        throw InputError(child(child("/prosumers", b), "id"),
                         fmt::format("duplicate prosumer id '{}'", doc.prosumers[b].id));
  if (root.contains("network")) {
    std::vector<std::string> ids;
    for (const auto& s : doc.prosumers) ids.push_back(s.id);
    doc.network = parse_network(root["network"], "/network", ids, time.horizon, series);
    for (auto& v : check_network(*doc.network, time.horizon)) violations.push_back(std::move(v));
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return doc;
}

json document_json(const ScenarioDocument& doc) {
  json root;
  root["version"] = doc.version;
  if (doc.currency_label) root["currency_label"] = *doc.currency_label;
  const auto& time = doc.prosumers.front().time;
  root["time"] = {{"step_hours", time.step_hours}, {"horizon", time.horizon}};
  root["prosumers"] = json::array();
  for (const auto& s : doc.prosumers) root["prosumers"].push_back(prosumer_json(s));
  if (doc.network) root["network"] = network_json(*doc.network);
  return root;
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("", fmt::format("cannot read file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ScenarioDocument parse_scenario(std::string_view json_text, const std::filesystem::path& base_dir) {
  return parse_document(parse_json_text(json_text, "/"), base_dir);
}

ScenarioDocument load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_text_file(path), path.parent_path());
}

std::string write_scenario(const ScenarioDocument& doc) {
  if (doc.prosumers.empty()) throw std::invalid_argument("document has no prosumers");
  return document_json(doc).dump(2) + "\n";
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::string out;
  for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

std::string input_digest(const ScenarioDocument& doc) { return sha256_hex(write_scenario(doc)); }

namespace {

sweeps::WeatherCase parse_weather(const json& j, const std::string& ptr, int horizon,
                                  double step_hours, SeriesReader& series) {
  expect_object(j, ptr, {"label", "irradiation", "clear_sky"});
  sweeps::WeatherCase w;
  w.label = text(require(j, "label", ptr), child(ptr, "label"));
  const bool given = j.contains("irradiation");
  if (given == j.contains("clear_sky"))
    throw InputError(ptr, "give exactly one of 'irradiation' or 'clear_sky'");
  if (given) {
    w.irradiation = series.read(j["irradiation"], child(ptr, "irradiation"), horizon);
  } else {
    const auto cptr = child(ptr, "clear_sky");
    const json& c = j["clear_sky"];
    expect_object(c, cptr, {"latitude", "first_day"});
    profiles::ClearSkySite site;
    site.latitude_deg = number(require(c, "latitude", cptr), child(cptr, "latitude"));
    site.first_day_of_year = static_cast<int>(number(require(c, "first_day", cptr), child(cptr, "first_day")));
    w.irradiation = profiles::clear_sky_irradiation(site, horizon, step_hours);
  }
  if (static_cast<int>(w.irradiation.size()) != horizon)
    throw InputError(ptr, fmt::format("weather '{}' has {} steps, horizon is {}", w.label,
                                      w.irradiation.size(), horizon));
  return w;
}

}  // namespace

SweepDocument parse_sweep(std::string_view json_text, const std::filesystem::path& base_dir) {
  const json root = parse_json_text(json_text, "/");
  expect_object(root, "", {"version", "scenario", "prosumer", "axis", "values", "outputs",
                           "literal_degradation"});
  const json& version = require(root, "version", "");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion)
    throw InputError("/version", fmt::format("unsupported version {}", version.dump()));

  SweepDocument out;
  const json& sj = require(root, "scenario", "");
  if (sj.is_string()) {
    out.source = load_scenario(base_dir / sj.get<std::string>());
  } else {
    try {
      out.source = parse_document(sj, base_dir);
    } catch (const InputError& e) {
      throw InputError("/scenario" + e.where(), std::string(e.what()).substr(e.where().size() + 2));
    }
  }
  const auto& prosumers = out.source.prosumers;
  std::size_t pick = 0;
  if (root.contains("prosumer")) {
    const auto id = text(root["prosumer"], "/prosumer");
    const auto it = std::find_if(prosumers.begin(), prosumers.end(),
                                 [&](const auto& s) { return s.id == id; });
    if (it == prosumers.end()) throw InputError("/prosumer", fmt::format("no prosumer '{}'", id));
    pick = static_cast<std::size_t>(it - prosumers.begin());
  } else if (prosumers.size() != 1) {
    throw InputError("/prosumer", "required when the scenario holds several prosumers");
  }
  auto& spec = out.spec;
  spec.base = prosumers[pick];
  const auto axis_text = text(require(root, "axis", ""), "/axis");
  const auto axis = sweeps::parse_axis(axis_text);
  if (!axis) throw InputError("/axis", "axis must be one of fluid, size, collector, weather");
  spec.axis = *axis;
  if (root.contains("literal_degradation")) {
    if (!root["literal_degradation"].is_boolean())
      throw InputError("/literal_degradation", "expected a boolean");
    if (root["literal_degradation"].get<bool>())
      spec.build.degradation = sorc::DegradationMode::LiteralFactor;
  }

  const auto& cat = builtin_catalog();
  SeriesReader series(base_dir);
  const int horizon = spec.base.time.horizon;
  const bool has_values = root.contains("values");
  const json values = has_values ? root["values"] : json::array();
  if (has_values && (!values.is_array() || values.empty()))
    throw InputError("/values", "expected a non-empty array");
  switch (spec.axis) {
    case sweeps::Axis::Fluid:
      if (!has_values) spec.fluids = cat.fluids;
      for (std::size_t k = 0; k < values.size(); ++k)
        spec.fluids.push_back(parse_fluid(values[k], child("/values", k)));
      break;
    case sweeps::Axis::Size:
      if (!has_values) spec.sizes_kw = cat.sizes_kw;
      for (std::size_t k = 0; k < values.size(); ++k)
        spec.sizes_kw.push_back(number(values[k], child("/values", k)));
      break;
    case sweeps::Axis::Collector:
      if (!has_values) spec.collectors = cat.collectors;
      for (std::size_t k = 0; k < values.size(); ++k) {
        const auto vptr = child("/values", k);
        if (values[k].is_string()) {
          const auto tech = parse_collector_tech(values[k].get<std::string>());
          const auto c = tech ? find_collector(*tech) : std::nullopt;
          if (!c) throw InputError(vptr, "unknown catalog collector");
          spec.collectors.push_back(*c);
        } else {
          json with_area = values[k];
          if (with_area.is_object() && !with_area.contains("area")) with_area["area"] = spec.base.collector.area;
          spec.collectors.push_back(parse_collector(with_area, vptr));
        }
      }
      break;
    case sweeps::Axis::Weather:
      if (!has_values) throw InputError("/values", "the weather axis needs explicit values");
      for (std::size_t k = 0; k < values.size(); ++k)
        spec.weathers.push_back(
            parse_weather(values[k], child("/values", k), horizon, spec.base.time.step_hours, series));
      break;
  }
  if (root.contains("outputs")) {
    const json& oj = root["outputs"];
    if (!oj.is_array() || oj.empty()) throw InputError("/outputs", "expected a non-empty array");
    spec.outputs.clear();
    for (std::size_t k = 0; k < oj.size(); ++k) {
      const auto optr = child("/outputs", k);
      const auto m = sweeps::parse_metric(text(oj[k], optr));
      if (!m) throw InputError(optr, "unknown metric");
      spec.outputs.push_back(*m);
    }
  }
  return out;
}

SweepDocument load_sweep(const std::filesystem::path& path) {
  return parse_sweep(read_text_file(path), path.parent_path());
}

}  // namespace orcgrid::io
