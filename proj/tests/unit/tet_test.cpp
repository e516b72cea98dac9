#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles/min_cost_flow.hpp"
#include "support/random_communities.hpp"
#include "orcgrid/milp/mps.hpp"
#include "orcgrid/profiles.hpp"
#include "orcgrid/tet.hpp"

namespace orcgrid::tet {
namespace {

ImbalanceSet make_imbalance(std::vector<std::string> ids, std::vector<std::vector<double>> out,
                            std::vector<std::vector<double>> in) {
  return {std::move(ids), std::move(out), std::move(in)};
}

TEST(SolveTet, MatchedPairTradesDirectly) {
  const auto imb = make_imbalance({"s", "b"}, {{2.0}, {0.0}}, {{0.0}, {2.0}});
  const auto net = make_uniform_network({"s", "b"}, 1, 0.01, 0.05, 0.05);
  const auto c = solve_tet(imb, net);
  EXPECT_NEAR(c.flux[0][1][0], 2.0, 1e-12);
  EXPECT_NEAR(c.objective, 0.02, 1e-12);
  EXPECT_EQ(c.h_in[0], 0.0);
  EXPECT_EQ(c.h_out[0], 0.0);
}

TEST(SolveTet, SurplusSpillsToGrid) {
  const auto imb = make_imbalance({"s", "b"}, {{3.0}, {0.0}}, {{0.0}, {2.0}});
  const auto net = make_uniform_network({"s", "b"}, 1, 0.01, 0.05, 0.05);
  const auto c = solve_tet(imb, net);
  EXPECT_NEAR(c.flux[0][1][0], 2.0, 1e-12);
  EXPECT_NEAR(c.grid_sales[0][0], 1.0, 1e-12);
  EXPECT_NEAR(c.objective, 0.07, 1e-12);
  EXPECT_NEAR(c.h_out[0], 1.0, 1e-12);
}

TEST(SolveTet, SellerOnlyCommunityExportsEverything) {
  const auto imb = make_imbalance({"a", "b", "c"}, {{1.0, 0.5}, {2.0, 0.0}, {0.25, 3.0}},
                                  {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}});
  const auto net = make_uniform_network({"a", "b", "c"}, 2, 0.01, 0.2, 0.03);
  const auto c = solve_tet(imb, net);
  EXPECT_NEAR(c.h_out[0], 3.25, 1e-12);
  EXPECT_NEAR(c.h_out[1], 3.5, 1e-12);
  EXPECT_EQ(c.h_in[0], 0.0);
  EXPECT_EQ(c.h_in[1], 0.0);
  EXPECT_EQ(c.p2p_volume(), 0.0);
}

TEST(SolveTet, ZeroCostsGiveZeroObjective) {
  const auto imb = make_imbalance({"a", "b"}, {{4.0, 0.0}, {0.0, 1.0}}, {{0.0, 2.0}, {3.0, 0.0}});
  const auto net = make_uniform_network({"a", "b"}, 2, 0.0, 0.0, 0.0);
  EXPECT_EQ(solve_tet(imb, net).objective, 0.0);
}

TEST(SolveTet, RejectsMismatchedInputs) {
  const auto imb = make_imbalance({"a", "b"}, {{1.0}, {0.0}}, {{0.0}, {1.0}});
  EXPECT_THROW((void)solve_tet(imb, make_uniform_network({"a", "c"}, 1, 0, 0, 0)),
               std::invalid_argument);
  EXPECT_THROW((void)solve_tet(imb, make_uniform_network({"a", "b"}, 2, 0, 0, 0)),
               std::invalid_argument);
  auto negative = imb;
  negative.export_offer[0][0] = -1.0;
  EXPECT_THROW((void)solve_tet(negative, make_uniform_network({"a", "b"}, 1, 0, 0, 0)),
               std::invalid_argument);
}

TEST(SolveTet, UnmeetableLowerBoundIsReported) {
  const auto imb = make_imbalance({"a", "b"}, {{1.0}, {0.0}}, {{0.0}, {1.0}});
  auto net = make_uniform_network({"a", "b"}, 1, 0.0, 0.1, 0.1);
  net.f_min[1][0] = 0.5;
  EXPECT_THROW((void)solve_tet(imb, net), ClearingError);
}

using testgen::random_community;

double oracle_total(const testgen::RandomCommunity& rc) {
  return oracle::clearing_oracle_total(rc.imb, rc.net);
}

TEST(TetProperty, MatchesMinCostFlowOracle) {
  std::mt19937_64 rng(8080);
  for (int trial = 0; trial < 30; ++trial) {
    const auto rc = random_community(rng, 2 + trial % 3, 1 + trial % 3);
    SCOPED_TRACE(trial);
    const double ref = oracle_total(rc);
    const auto c = solve_tet(rc.imb, rc.net);
    EXPECT_NEAR(c.objective, ref, 1e-6 * std::max(1.0, std::abs(ref)));
    EXPECT_LE(c.objective, grid_only_cost(rc.imb, rc.net) + 1e-9);
  }
}

TEST(TetProperty, ConservationAndObjectiveConsistency) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rc = random_community(rng, 4, 3);
    const auto c = solve_tet(rc.imb, rc.net);
    const int n = rc.imb.size();
    for (int t = 0; t < rc.imb.horizon(); ++t) {
      double volume = 0.0, supply = c.h_in[t], sink = c.h_out[t];
      double grid_in = 0.0, grid_out = 0.0;
      for (int i = 0; i < n; ++i) {
        double sold = c.grid_sales[i][t], bought = c.grid_purchases[i][t];
        for (int j = 0; j < n; ++j) {
          if (i == j) continue;
          sold += c.flux[i][j][t];
          bought += c.flux[j][i][t];
          EXPECT_LE(c.flux[i][j][t], rc.net.f_max[i][j] + 1e-9);
          EXPECT_GE(c.flux[i][j][t], rc.net.f_min[i][j] - 1e-9);
        }
        const double offer = rc.imb.export_offer[i][t];
        const double need = rc.imb.import_need[i][t];
        volume += offer + need;
        supply += offer;
        sink += need;
        grid_in += c.grid_sales[i][t];
        grid_out += c.grid_purchases[i][t];
        EXPECT_NEAR(sold, offer, 1e-9 * std::max(1.0, offer));
        EXPECT_NEAR(bought, need, 1e-9 * std::max(1.0, need));
      }
      const double tol = 1e-9 * std::max(1.0, volume);
      EXPECT_NEAR(supply, sink, tol);
      EXPECT_NEAR(c.h_out[t], grid_in, tol);
      EXPECT_NEAR(c.h_in[t], grid_out, tol);
    }
    EXPECT_NEAR(c.objective, clearing_cost(c, rc.net), 1e-9 * std::max(1.0, std::abs(c.objective)));
  }
}

TEST(TetProperty, CostScalingByLambda) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto rc = random_community(rng, 3, 2);
    auto scaled = rc.net;
    for (auto& a : scaled.transmission_cost)
      for (auto& b : a)
        for (auto& c : b) c *= 7.0;
    for (auto& a : scaled.grid_buy_cost)
      for (auto& c : a) c *= 7.0;
    for (auto& a : scaled.grid_sell_cost)
      for (auto& c : a) c *= 7.0;
    const auto base = solve_tet(rc.imb, rc.net);
    const auto big = solve_tet(rc.imb, scaled);
    const double tol = 1e-9 * std::max(1.0, std::abs(big.objective));
    EXPECT_NEAR(big.objective, 7.0 * base.objective, tol);
    EXPECT_NEAR(clearing_cost(base, scaled), big.objective, tol);
  }
}

TEST(TetProperty, RaisingOneArcCostNeverLowersObjective) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    const auto rc = random_community(rng, 3, 2);
    const double before = solve_tet(rc.imb, rc.net).objective;
    auto net = rc.net;
    net.transmission_cost[trial % 3][(trial + 1) % 3][trial % 2] += 0.15;
    EXPECT_GE(solve_tet(rc.imb, net).objective, before - 1e-12);
  }
}

TEST(TetProperty, BlocksSolveIndependently) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 5; ++trial) {
    const auto rc = random_community(rng, 3, 3);
    const auto joint = milp::solve_lp(build_tet_model(rc.imb, rc.net).model);
    ASSERT_EQ(joint.status, milp::SolveStatus::Optimal);
    const double separate = solve_tet(rc.imb, rc.net).objective;
    EXPECT_NEAR(joint.objective, separate, 1e-9 * std::max(1.0, std::abs(separate)));
  }
}

TEST(TetProperty, MpsRoundTripKeepsObjective) {
  std::mt19937_64 rng(99);
  const auto rc = random_community(rng, 4, 2);
  const auto model = build_tet_model(rc.imb, rc.net).model;
  const auto back = milp::read_mps(milp::write_mps(model));
  EXPECT_NEAR(milp::solve_lp(back).objective, milp::solve_lp(model).objective, 1e-9);
}

TEST(TradeList, OrderedAndPriced) {
  const auto imb = make_imbalance({"s", "b"}, {{3.0}, {0.0}}, {{0.0}, {2.0}});
  const auto net = make_uniform_network({"s", "b"}, 1, 0.01, 0.05, 0.05);
  const auto trades = solve_tet(imb, net).trades(net);
  ASSERT_EQ(trades.size(), 2u);
  EXPECT_EQ(trades[0].seller, 0);
  EXPECT_EQ(trades[0].buyer, 1);
  EXPECT_EQ(trades[1].buyer, kGrid);
  EXPECT_NEAR(trades[1].cost, 0.05, 1e-12);
}

MicrogridScenario industrial(const std::string& id, int horizon) {
  auto s = profiles::demo_plant(id, horizon);
  s.demand = profiles::industrial_demand(horizon, 2.5);
  s.collector.area = 15.0;
  return s;
}

MicrogridScenario household(const std::string& id, int horizon) {
  auto s = profiles::demo_plant(id, horizon);
  s.demand = profiles::household_demand(horizon, 0.6);
  s.collector.area = 35.0;
  s.battery.b_max = 1.0;
  return s;
}

TEST(Pipeline, SingleProsumerUsesOnlyGridArcs) {
  const auto s = profiles::demo_plant("solo", 24);
  const auto net = make_uniform_network({"solo"}, 24, 0.01, 0.25, 0.05);
  const auto r = run_pipeline({s}, net);
  EXPECT_EQ(r.clearing.p2p_volume(), 0.0);
  EXPECT_NEAR(r.kpi.trading_gain, 0.0, 1e-12);
  EXPECT_NEAR(r.kpi.trading_cost, r.kpi.grid_only_trading_cost, 1e-9);
}

TEST(Pipeline, IdenticalProsumersDoNotTrade) {
  const auto a = profiles::demo_plant("a", 24);
  auto b = a;
  b.id = "b";
  const auto net = make_uniform_network({"a", "b"}, 24, 0.01, 0.25, 0.05);
  const auto r = run_pipeline({a, b}, net);
  EXPECT_EQ(r.clearing.p2p_volume(), 0.0);
}

TEST(Pipeline, ComplementaryProfilesTrade) {
  const int horizon = 48;
  const auto net = make_uniform_network({"factory", "home"}, horizon, 0.01, 0.25, 0.05);
  const auto r = run_pipeline({industrial("factory", horizon), household("home", horizon)}, net);
  EXPECT_GT(r.clearing.p2p_volume(), 0.0);
  EXPECT_LE(r.kpi.trading_cost, r.kpi.grid_only_trading_cost + 1e-9);
  EXPECT_GT(r.kpi.trading_savings, 0.0);

  // baseline with every P2P arc closed
  auto closed = net;
  for (auto& row : closed.f_max)
    for (auto& f : row) f = 0.0;
  const auto grid_only = solve_tet(r.imbalances, closed);
  EXPECT_NEAR(grid_only.objective, r.kpi.grid_only_trading_cost, 1e-9);
  EXPECT_LE(r.kpi.community_cost, r.kpi.local_cost + grid_only.objective + 1e-9);
}

TEST(Pipeline, StageOneFailureNamesProsumer) {
  auto a = profiles::demo_plant("ok", 4);
  auto b = profiles::demo_plant("broken", 4);
  b.orc.x_min = 1.0;
  b.irradiation = profiles::constant(4, 0.0);
  const auto net = make_uniform_network({"ok", "broken"}, 4, 0.0, 0.1, 0.0);
  try {
    (void)run_pipeline({a, b}, net);
    FAIL() << "expected PipelineError";
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.prosumer(), "broken");
    EXPECT_EQ(e.kind(), PipelineError::Kind::Infeasible);
    EXPECT_NE(std::string(e.what()).find("broken"), std::string::npos);
  }
}

TEST(Pipeline, ParallelAndSerialAgree) {
  const int horizon = 24;
  std::vector<MicrogridScenario> community = {industrial("f", horizon), household("h", horizon),
                                              profiles::demo_plant("d", horizon)};
  const auto net = make_uniform_network({"f", "h", "d"}, horizon, 0.01, 0.25, 0.05);
  PipelineOptions serial;
  serial.threads = 1;
  PipelineOptions parallel;
  parallel.threads = 3;
  const auto a = run_pipeline(community, net, serial);
  const auto b = run_pipeline(community, net, parallel);
  EXPECT_EQ(a.kpi.community_cost, b.kpi.community_cost);
  EXPECT_EQ(a.clearing.flux, b.clearing.flux);
}

}  // namespace
}  // namespace orcgrid::tet
