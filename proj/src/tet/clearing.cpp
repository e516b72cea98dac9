#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "orcgrid/parallel.hpp"
#include "orcgrid/tet.hpp"

namespace orcgrid::tet {

using milp::kInf;
using milp::RowSense;
using milp::Term;

int ImbalanceSet::horizon() const {
  return export_offer.empty() ? 0 : static_cast<int>(export_offer.front().size());
}

ImbalanceSet imbalances_from(const std::vector<sorc::SorcSchedule>& schedules) {
  ImbalanceSet imb;
  for (const auto& s : schedules) {
    imb.participants.push_back(s.id);
    auto& out = imb.export_offer.emplace_back();
    auto& in = imb.import_need.emplace_back();
    for (const auto& st : s.steps) {
      out.push_back(st.grid_export);
      in.push_back(st.grid_import);
    }
  }
  return imb;
}

void check_inputs(const ImbalanceSet& imb, const TradeNetwork& net) {
  if (imb.participants != net.participants)
    throw std::invalid_argument("imbalance participants do not match network participants");
  const int horizon = imb.horizon();
  const auto n = static_cast<std::size_t>(imb.size());
  if (imb.export_offer.size() != n || imb.import_need.size() != n)
    throw std::invalid_argument("imbalance set needs one series per participant");
  if (net.horizon() != horizon)
    throw std::invalid_argument(
        fmt::format("network horizon {} differs from imbalance horizon {}", net.horizon(), horizon));
  for (std::size_t j = 0; j < n; ++j) {
    if (static_cast<int>(imb.export_offer[j].size()) != horizon ||
        static_cast<int>(imb.import_need[j].size()) != horizon)
      throw std::invalid_argument(
          fmt::format("imbalance series of '{}' has the wrong length", imb.participants[j]));
    for (int t = 0; t < horizon; ++t) {
      const auto k = static_cast<std::size_t>(t);
      if (!(imb.export_offer[j][k] >= 0.0) || !(imb.import_need[j][k] >= 0.0))
        throw std::invalid_argument(fmt::format("negative imbalance for '{}' at step {}",
                                                imb.participants[j], t + 1));
    }
  }
}

namespace {

TetModel build_steps(const ImbalanceSet& imb, const TradeNetwork& net,
                     const std::vector<int>& steps) {
  check_inputs(imb, net);
  TetModel out;
  auto& m = out.model;
  auto& v = out.map;
  m.name = "tet";
  v.steps = steps;
  const int n = imb.size();
  const auto un = static_cast<std::size_t>(n);
  const std::size_t ns = steps.size();
  v.flux.assign(un, std::vector<std::vector<int>>(un, std::vector<int>(ns, -1)));
  v.to_grid.assign(un, std::vector<int>(ns, -1));
  v.from_grid.assign(un, std::vector<int>(ns, -1));
  for (std::size_t k = 0; k < ns; ++k) {
    const int t = steps[k];
    const auto ut = static_cast<std::size_t>(t);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const int f = m.add_var(fmt::format("f_{}_{}_{}", i, j, t + 1), net.f_min[i][j],
                                net.f_max[i][j]);
        v.flux[i][j][k] = f;
        m.add_cost(f, net.transmission_cost[i][j][ut]);
      }
      const int sell = m.add_var(fmt::format("f_{}_G_{}", i, t + 1), 0.0, kInf);
      v.to_grid[i][k] = sell;
      m.add_cost(sell, net.grid_sell_cost[i][ut]);
    }
    for (int j = 0; j < n; ++j) {
      const int buy = m.add_var(fmt::format("f_G_{}_{}", j, t + 1), 0.0, kInf);
      v.from_grid[j][k] = buy;
      m.add_cost(buy, net.grid_buy_cost[j][ut]);
    }
    v.h_in.push_back(m.add_var(fmt::format("h_in_{}", t + 1), 0.0, kInf));
    v.h_out.push_back(m.add_var(fmt::format("h_out_{}", t + 1), 0.0, kInf));

    for (int i = 0; i < n; ++i) {
      std::vector<Term> terms;
      for (int j = 0; j < n; ++j)
        if (j != i) terms.push_back({v.flux[i][j][k], 1.0});
      terms.push_back({v.to_grid[i][k], 1.0});
      m.add_row(fmt::format("sell_{}_{}", i, t + 1), std::move(terms), RowSense::EQ,
                imb.export_offer[i][ut]);
    }
    for (int j = 0; j < n; ++j) {
      std::vector<Term> terms;
      for (int i = 0; i < n; ++i)
        if (i != j) terms.push_back({v.flux[i][j][k], 1.0});
      terms.push_back({v.from_grid[j][k], 1.0});
      m.add_row(fmt::format("buy_{}_{}", j, t + 1), std::move(terms), RowSense::EQ,
                imb.import_need[j][ut]);
    }
    std::vector<Term> out_terms{{v.h_out[k], 1.0}};
    std::vector<Term> in_terms{{v.h_in[k], 1.0}};
    for (int i = 0; i < n; ++i) {
      out_terms.push_back({v.to_grid[i][k], -1.0});
      in_terms.push_back({v.from_grid[i][k], -1.0});
    }
    m.add_row(fmt::format("h_out_def_{}", t + 1), std::move(out_terms), RowSense::EQ, 0.0);
    m.add_row(fmt::format("h_in_def_{}", t + 1), std::move(in_terms), RowSense::EQ, 0.0);
  }
  return out;
}

}  // namespace

TetModel build_tet_model(const ImbalanceSet& imb, const TradeNetwork& net) {
  std::vector<int> steps;
  for (int t = 0; t < imb.horizon(); ++t) steps.push_back(t);
  return build_steps(imb, net, steps);
}

TetModel build_tet_step(const ImbalanceSet& imb, const TradeNetwork& net, int step) {
  if (step < 0 || step >= imb.horizon()) throw std::out_of_range("step outside the horizon");
  return build_steps(imb, net, {step});
}

TradeClearing solve_tet(const ImbalanceSet& imb, const TradeNetwork& net,
                        const TetOptions& options) {
  check_inputs(imb, net);
  const int n = imb.size();
  const auto un = static_cast<std::size_t>(n);
  const int horizon = imb.horizon();
  const auto ut = static_cast<std::size_t>(horizon);
  TradeClearing out;
  out.participants = imb.participants;
  out.flux.assign(un, std::vector<std::vector<double>>(un, std::vector<double>(ut, 0.0)));
  out.grid_sales.assign(un, std::vector<double>(ut, 0.0));
  out.grid_purchases.assign(un, std::vector<double>(ut, 0.0));
  out.h_in.assign(ut, 0.0);
  out.h_out.assign(ut, 0.0);
  std::vector<milp::Solution> solutions(ut);
  std::vector<TetModel> blocks(ut);

  parallel_for(ut, options.threads, [&](std::size_t t) {
    blocks[t] = build_tet_step(imb, net, static_cast<int>(t));
    solutions[t] = milp::solve_lp(blocks[t].model);
  });

  for (std::size_t t = 0; t < ut; ++t) {
    const auto& sol = solutions[t];
    if (sol.status != milp::SolveStatus::Optimal)
      throw ClearingError(fmt::format("trade clearing at step {} is {}", t + 1,
                                      milp::to_string(sol.status)),
                          sol.status, sol.conflict_rows);
    const auto& v = blocks[t].map;
    auto val = [&](int idx) {
      const double x = sol.values[static_cast<std::size_t>(idx)];
      return x > 0.0 ? x : 0.0;
    };
    for (std::size_t i = 0; i < un; ++i) {
      for (std::size_t j = 0; j < un; ++j)
        if (i != j) out.flux[i][j][t] = val(v.flux[i][j][0]);
      out.grid_sales[i][t] = val(v.to_grid[i][0]);
      out.grid_purchases[i][t] = val(v.from_grid[i][0]);
    }
    out.h_in[t] = val(v.h_in[0]);
    out.h_out[t] = val(v.h_out[0]);
    out.stats.lp_iterations += sol.stats.lp_iterations;
    out.stats.nodes += sol.stats.nodes;
    out.stats.wall_seconds += sol.stats.wall_seconds;
  }
  out.objective = clearing_cost(out, net);
  return out;
}

double clearing_cost(const TradeClearing& c, const TradeNetwork& net) {
  double total = 0.0;
  const auto un = c.participants.size();
  for (std::size_t t = 0; t < static_cast<std::size_t>(c.horizon()); ++t) {
    for (std::size_t i = 0; i < un; ++i) {
      for (std::size_t j = 0; j < un; ++j)
        if (i != j) total += net.transmission_cost[i][j][t] * c.flux[i][j][t];
      total += net.grid_sell_cost[i][t] * c.grid_sales[i][t];
      total += net.grid_buy_cost[i][t] * c.grid_purchases[i][t];
    }
  }
  return total;
}

double grid_only_cost(const ImbalanceSet& imb, const TradeNetwork& net) {
  double total = 0.0;
  for (std::size_t j = 0; j < imb.participants.size(); ++j)
    for (std::size_t t = 0; t < static_cast<std::size_t>(imb.horizon()); ++t)
      total += net.grid_sell_cost[j][t] * imb.export_offer[j][t] +
               net.grid_buy_cost[j][t] * imb.import_need[j][t];
  return total;
}

std::vector<Trade> TradeClearing::trades(const TradeNetwork& net) const {
  std::vector<Trade> out;
  const int n = static_cast<int>(participants.size());
  for (int t = 0; t < horizon(); ++t) {
    const auto ut = static_cast<std::size_t>(t);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const double kwh = flux[i][j][ut];
        if (kwh > 0.0) out.push_back({t, i, j, kwh, kwh * net.transmission_cost[i][j][ut]});
      }
      if (grid_sales[i][ut] > 0.0)
        out.push_back({t, i, kGrid, grid_sales[i][ut], grid_sales[i][ut] * net.grid_sell_cost[i][ut]});
    }
    for (int j = 0; j < n; ++j)
      if (grid_purchases[j][ut] > 0.0)
        out.push_back({t, kGrid, j, grid_purchases[j][ut],
                       grid_purchases[j][ut] * net.grid_buy_cost[j][ut]});
  }
  return out;
}

double TradeClearing::p2p_volume() const {
  double total = 0.0;
  for (std::size_t i = 0; i < flux.size(); ++i)
    for (std::size_t j = 0; j < flux.size(); ++j)
      if (i != j)
        for (double f : flux[i][j]) total += f;
  return total;
}

}  // namespace orcgrid::tet
