#include "orcgrid/domain.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace orcgrid {

EnthalpyDrops enthalpy_drops_from_temperatures(double cp, double dt_turbine,
                                               double eta_turbine, double dt_pump,
                                               double eta_pump) {
  EnthalpyDrops out;
  out.dh_turbine = cp * dt_turbine * eta_turbine / 1000.0;
  out.dh_pump = cp * dt_pump / (eta_pump * 1000.0);
  return out;
}

std::string_view to_string(CollectorTech tech) {
  switch (tech) {
    case CollectorTech::FPC: return "FPC";
    case CollectorTech::ETC: return "ETC";
    case CollectorTech::CPC: return "CPC";
    case CollectorTech::PTC: return "PTC";
    case CollectorTech::LFR: return "LFR";
    case CollectorTech::Custom: return "Custom";
  }
  return "Custom";
}

std::optional<CollectorTech> parse_collector_tech(std::string_view text) {
  for (auto t : {CollectorTech::FPC, CollectorTech::ETC, CollectorTech::CPC,
                 CollectorTech::PTC, CollectorTech::LFR, CollectorTech::Custom})
    if (to_string(t) == text) return t;
  return std::nullopt;
}

int TradeNetwork::horizon() const {
  if (!grid_buy_cost.empty()) return static_cast<int>(grid_buy_cost.front().size());
  return 0;
}

std::optional<int> TradeNetwork::index_of(std::string_view id) const {
  for (int i = 0; i < size(); ++i)
    if (participants[i] == id) return i;
  return std::nullopt;
}

TradeNetwork make_uniform_network(std::vector<std::string> participants, int horizon,
                                  double transmission_cost, double grid_buy_cost,
                                  double grid_sell_cost) {
  TradeNetwork net;
  const auto n = participants.size();
  const auto t = static_cast<std::size_t>(horizon);
  net.participants = std::move(participants);
  net.f_min.assign(n, std::vector<double>(n, 0.0));
  net.f_max.assign(n, std::vector<double>(n, std::numeric_limits<double>::infinity()));
  net.transmission_cost.assign(
      n, std::vector<std::vector<double>>(n, std::vector<double>(t, transmission_cost)));
  for (std::size_t i = 0; i < n; ++i) net.transmission_cost[i][i].assign(t, 0.0);
  net.grid_buy_cost.assign(n, std::vector<double>(t, grid_buy_cost));
  net.grid_sell_cost.assign(n, std::vector<double>(t, grid_sell_cost));
  return net;
}

namespace {

std::string fmt_value(double v) { return fmt::format("{:.9g}", v); }

class Checker {
 public:
  void require(bool ok, std::string field, std::string message, std::string observed) {
    if (!ok) out.push_back({std::move(field), std::move(message), std::move(observed)});
  }
  void positive(double v, const std::string& field) {
    require(v > 0.0, field, field + " must be > 0", fmt_value(v));
  }
  void nonneg(double v, const std::string& field) {
    require(v >= 0.0, field, field + " must be >= 0", fmt_value(v));
  }
  void fraction(double v, const std::string& field) {
    require(v > 0.0 && v <= 1.0, field, field + " must be in (0, 1]", fmt_value(v));
  }
  void finite(double v, const std::string& field) {
    require(std::isfinite(v), field, field + " must be finite", fmt_value(v));
  }
  void series(const std::vector<double>& s, int horizon, const std::string& field) {
    require(static_cast<int>(s.size()) == horizon, field,
            fmt::format("{} length must equal time.horizon ({})", field, horizon),
            std::to_string(s.size()));
    for (std::size_t t = 0; t < s.size(); ++t) {
      if (!std::isfinite(s[t]) || s[t] < 0.0) {
        out.push_back({fmt::format("{}[{}]", field, t), field + " values must be finite and >= 0",
                       fmt_value(s[t])});
        break;
      }
    }
  }

  std::vector<Violation> out;
};

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error([&] {
        std::string msg = "invalid input:";
        for (const auto& v : violations)
          msg += fmt::format("\n  {} (observed {})", v.message, v.observed);
        return msg;
      }()),
      violations_(std::move(violations)) {}

std::vector<Violation> check_scenario(const MicrogridScenario& s) {
  Checker c;
  c.require(!s.id.empty(), "id", "id must not be empty", "\"\"");
  c.positive(s.time.step_hours, "time.step_hours");
  c.require(s.time.horizon >= 1, "time.horizon", "time.horizon must be >= 1",
            std::to_string(s.time.horizon));

  const auto& f = s.fluid;
  c.positive(f.density, "fluid.density");
  c.positive(f.velocity, "fluid.velocity");
  c.nonneg(f.dh_pump, "fluid.dh_pump");
  c.require(f.dh_turbine > f.dh_pump, "fluid.dh_turbine",
            "fluid.dh_turbine must be > fluid.dh_pump", fmt_value(f.dh_turbine));

  c.fraction(s.collector.efficiency, "collector.efficiency");
  c.positive(s.collector.area, "collector.area");

  const auto& o = s.orc;
  c.fraction(o.eta_cycle, "orc.eta_cycle");
  c.fraction(o.eta_hx, "orc.eta_hx");
  c.nonneg(o.x_min, "orc.x_min");
  c.require(o.x_min <= o.x_max, "orc.x_max", "orc.x_min must be <= orc.x_max",
            fmt_value(o.x_max));
  c.nonneg(o.z_min, "orc.z_min");
  c.require(o.z_min <= o.z_max, "orc.z_max", "orc.z_min must be <= orc.z_max",
            fmt_value(o.z_max));
  c.finite(o.x_max, "orc.x_max");
  c.finite(o.z_max, "orc.z_max");
  if (o.section_area_max) c.positive(*o.section_area_max, "orc.section_area_max");

  const auto& b = s.battery;
  c.fraction(b.eta_round, "battery.eta_round");
  c.nonneg(b.b_min, "battery.b_min");
  c.require(b.b_min <= b.b_max, "battery.b_max", "battery.b_min must be <= battery.b_max",
            fmt_value(b.b_max));
  c.finite(b.b_max, "battery.b_max");
  c.require(b.fade >= 0.0 && b.fade < 1.0, "battery.fade", "battery.fade must be in [0, 1)",
            fmt_value(b.fade));
  c.positive(b.throughput, "battery.throughput");
  c.nonneg(b.cost_cycle, "battery.cost_cycle");

  const auto& g = s.tariff;
  c.require(g.g_min <= g.g_max, "tariff.g_max", "tariff.g_min must be <= tariff.g_max",
            fmt_value(g.g_max));
  c.finite(g.g_min, "tariff.g_min");
  c.finite(g.g_max, "tariff.g_max");
  c.series(g.price_buy, s.time.horizon, "tariff.price_buy");
  c.series(g.price_sell, s.time.horizon, "tariff.price_sell");
  if (g.price_buy.size() == g.price_sell.size()) {
    for (std::size_t t = 0; t < g.price_buy.size(); ++t) {
      if (g.price_buy[t] < g.price_sell[t]) {
        c.out.push_back({fmt::format("tariff.price_buy[{}]", t),
                         "tariff.price_buy must be >= tariff.price_sell",
                         fmt_value(g.price_buy[t])});
        break;
      }
    }
  }

  c.series(s.demand, s.time.horizon, "demand");
  c.series(s.irradiation, s.time.horizon, "irradiation");
  c.nonneg(s.production_cost, "production_cost");
  return c.out;
}

std::vector<Violation> check_network(const TradeNetwork& net, int horizon) {
  Checker c;
  const int n = net.size();
  const auto un = static_cast<std::size_t>(n);
  c.require(n >= 1, "network.participants", "network needs at least one participant", "0");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      c.require(net.participants[i] != net.participants[j], "network.participants",
                "participant ids must be unique", net.participants[i]);
  auto square = [&](const auto& mat, const std::string& field) {
    bool ok = mat.size() == un;
    for (const auto& row : mat) ok = ok && row.size() == un;
    c.require(ok, field, field + " must be an N x N matrix", std::to_string(mat.size()));
    return ok;
  };
  const bool bounds_ok = square(net.f_min, "network.f_min") && square(net.f_max, "network.f_max");
  if (bounds_ok) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double lo = net.f_min[i][j];
        const double hi = net.f_max[i][j];
        c.require(lo >= 0.0 && lo <= hi, fmt::format("network.f_min[{}][{}]", i, j),
                  "f_min must satisfy 0 <= f_min <= f_max", fmt_value(lo));
      }
  }
  if (square(net.transmission_cost, "network.transmission_cost")) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const auto& s = net.transmission_cost[i][j];
        if (i == j) continue;
        c.require(static_cast<int>(s.size()) == horizon,
                  fmt::format("network.transmission_cost[{}][{}]", i, j),
                  "transmission cost length must equal horizon", std::to_string(s.size()));
        for (double v : s)
          if (!(v >= 0.0) || !std::isfinite(v)) {
            c.out.push_back({fmt::format("network.transmission_cost[{}][{}]", i, j),
                             "transmission cost must be finite and >= 0", fmt_value(v)});
            break;
          }
      }
  }
  auto per_participant = [&](const auto& mat, const std::string& field) {
    c.require(mat.size() == un, field, field + " needs one series per participant",
              std::to_string(mat.size()));
    for (std::size_t i = 0; i < mat.size(); ++i) {
      c.require(static_cast<int>(mat[i].size()) == horizon, fmt::format("{}[{}]", field, i),
                "series length must equal horizon", std::to_string(mat[i].size()));
      for (double v : mat[i])
        if (!std::isfinite(v)) {
          c.out.push_back({fmt::format("{}[{}]", field, i), "costs must be finite", fmt_value(v)});
          break;
        }
    }
  };
  per_participant(net.grid_buy_cost, "network.grid_buy_cost");
  per_participant(net.grid_sell_cost, "network.grid_sell_cost");
  return c.out;
}

MicrogridScenario validate_scenario(MicrogridScenario raw) {
  auto violations = check_scenario(raw);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return raw;
}

TradeNetwork validate_network(TradeNetwork raw, int horizon) {
  auto violations = check_network(raw, horizon);
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return raw;
}

}  // namespace orcgrid
