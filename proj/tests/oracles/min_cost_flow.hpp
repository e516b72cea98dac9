#pragma once

// Successive-shortest-path min-cost flow (Bellman-Ford paths). Test oracle
// only; independent of the LP engine.

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "orcgrid/domain.hpp"
#include "orcgrid/tet.hpp"

namespace oracle {

class MinCostFlow {
 public:
  explicit MinCostFlow(int nodes) : adj_(static_cast<std::size_t>(nodes)) {}

  void add_edge(int from, int to, double cap, double cost) {
    adj_[from].push_back({to, static_cast<int>(adj_[to].size()), cap, cost});
    adj_[to].push_back({from, static_cast<int>(adj_[from].size()) - 1, 0.0, -cost});
  }

  /// Returns (flow, cost) after pushing up to `demand` units from s to t.
  std::pair<double, double> run(int s, int t, double demand) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    constexpr double eps = 1e-12;
    const auto n = adj_.size();
    double flow = 0.0;
    double cost = 0.0;
    while (flow < demand - eps) {
      std::vector<double> dist(n, inf);
      std::vector<int> prev_node(n, -1), prev_edge(n, -1);
      dist[static_cast<std::size_t>(s)] = 0.0;
      for (std::size_t round = 0; round < n; ++round) {
        bool changed = false;
        for (std::size_t u = 0; u < n; ++u) {
          if (dist[u] == inf) continue;
          for (std::size_t e = 0; e < adj_[u].size(); ++e) {
            const auto& ed = adj_[u][e];
            if (ed.cap <= eps) continue;
            const auto to = static_cast<std::size_t>(ed.to);
            if (dist[u] + ed.cost < dist[to] - 1e-15) {
              dist[to] = dist[u] + ed.cost;
              prev_node[to] = static_cast<int>(u);
              prev_edge[to] = static_cast<int>(e);
              changed = true;
            }
          }
        }
        if (!changed) break;
      }
      if (dist[static_cast<std::size_t>(t)] == inf) break;
      double push = demand - flow;
      for (int v = t; v != s; v = prev_node[static_cast<std::size_t>(v)])
        push = std::min(push, adj_[prev_node[v]][prev_edge[v]].cap);
      for (int v = t; v != s; v = prev_node[static_cast<std::size_t>(v)]) {
        auto& ed = adj_[prev_node[v]][prev_edge[v]];
        ed.cap -= push;
        adj_[v][ed.rev].cap += push;
      }
      flow += push;
      cost += push * dist[static_cast<std::size_t>(t)];
    }
    return {flow, cost};
  }

 private:
  struct Edge {
    int to;
    int rev;
    double cap;
    double cost;
  };
  std::vector<std::vector<Edge>> adj_;
};

/// Optimal clearing cost of one step, or nullopt when the arc lower bounds
/// cannot be met. Lower bounds are pre-routed before the flow search.
inline std::optional<double> clearing_oracle(const std::vector<double>& offer,
                                             const std::vector<double>& need,
                                             const orcgrid::TradeNetwork& net, int step) {
  const int n = static_cast<int>(offer.size());
  const auto t = static_cast<std::size_t>(step);
  std::vector<double> out = offer, in = need;
  double fixed = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double lo = net.f_min[i][j];
      fixed += lo * net.transmission_cost[i][j][t];
      out[i] -= lo;
      in[j] -= lo;
    }
  for (int k = 0; k < n; ++k)
    if (out[k] < -1e-12 || in[k] < -1e-12) return std::nullopt;
  double total_out = 0.0, total_in = 0.0;
  for (int k = 0; k < n; ++k) {
    out[k] = std::max(0.0, out[k]);
    in[k] = std::max(0.0, in[k]);
    total_out += out[k];
    total_in += in[k];
  }
  // nodes: 0 source, 1..n sellers, n+1..2n buyers, 2n+1 grid supply,
  // 2n+2 grid sink, 2n+3 sink
  const int src = 0, gsup = 2 * n + 1, gsink = 2 * n + 2, sink = 2 * n + 3;
  constexpr double big = std::numeric_limits<double>::infinity();
  MinCostFlow g(2 * n + 4);
  for (int i = 0; i < n; ++i) {
    g.add_edge(src, 1 + i, out[i], 0.0);
    g.add_edge(1 + n + i, sink, in[i], 0.0);
    g.add_edge(1 + i, gsink, big, net.grid_sell_cost[i][t]);
    g.add_edge(gsup, 1 + n + i, big, net.grid_buy_cost[i][t]);
    for (int j = 0; j < n; ++j)
      if (i != j)
        g.add_edge(1 + i, 1 + n + j, net.f_max[i][j] - net.f_min[i][j],
                   net.transmission_cost[i][j][t]);
  }
  g.add_edge(src, gsup, total_in, 0.0);
  g.add_edge(gsink, sink, total_out, 0.0);
  g.add_edge(gsup, gsink, big, 0.0);
  const double demand = total_in + total_out;
  const auto [flow, cost] = g.run(src, sink, demand);
  if (flow < demand - 1e-9 * std::max(1.0, demand)) return std::nullopt;
  return fixed + cost;
}

/// Sum of per-step oracle costs; throws when some step has no feasible
/// clearing.
inline double clearing_oracle_total(const orcgrid::tet::ImbalanceSet& imb,
                                    const orcgrid::TradeNetwork& net) {
  double total = 0.0;
  for (int t = 0; t < imb.horizon(); ++t) {
    std::vector<double> out, in;
    for (int i = 0; i < imb.size(); ++i) {
      out.push_back(imb.export_offer[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)]);
      in.push_back(imb.import_need[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)]);
    }
    const auto cost = clearing_oracle(out, in, net, t);
    if (!cost) throw std::runtime_error("oracle: no feasible clearing");
    total += *cost;
  }
  return total;
}

}  // namespace oracle
