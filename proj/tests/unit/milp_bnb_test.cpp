#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles/dense_tableau.hpp"
#include "orcgrid/milp/solution.hpp"

namespace orcgrid::milp {
namespace {

TEST(SolveMilp, TinyKnapsack) {
  MilpModel m;
  const int y1 = m.add_binary("y1");
  const int y2 = m.add_binary("y2");
  m.add_row("cap", {{y1, 2.0}, {y2, 2.0}}, RowSense::LE, 3.0);
  m.add_cost(y1, -3.0);
  m.add_cost(y2, -2.0);
  const Solution s = solve_milp(m);
  ASSERT_EQ(s.status, SolveStatus::Optimal);
  EXPECT_DOUBLE_EQ(s.objective, -3.0);
  EXPECT_DOUBLE_EQ(s.values[y1], 1.0);
  EXPECT_DOUBLE_EQ(s.values[y2], 0.0);
  EXPECT_LE(s.gap, 1e-6);
}

TEST(SolveMilp, IntegralRelaxationSolvesAtRoot) {
  MilpModel m;
  const int y = m.add_binary("y");
  const int x = m.add_var("x", 0.0, 4.0);
  m.add_row("link", {{x, 1.0}, {y, -4.0}}, RowSense::LE, 0.0);
  m.add_cost(x, -1.0);
  m.add_cost(y, 0.5);
  const Solution lp = solve_lp(m);
  const Solution ip = solve_milp(m);
  ASSERT_EQ(ip.status, SolveStatus::Optimal);
  EXPECT_EQ(ip.stats.nodes, 1);
  EXPECT_EQ(ip.values, lp.values);
  EXPECT_EQ(ip.objective, lp.objective);
}

TEST(SolveMilp, LpFeasibleButIntegerInfeasible) {
  MilpModel m;
  const int a = m.add_binary("a");
  const int b = m.add_binary("b");
  m.add_row("half", {{a, 1.0}, {b, 1.0}}, RowSense::EQ, 1.5);
  const Solution s = solve_milp(m);
  EXPECT_EQ(s.status, SolveStatus::Infeasible);
  EXPECT_FALSE(s.has_incumbent());
}

TEST(SolveMilp, NodeLimitReportsGapLimitWithBound) {
  MilpModel m;
  std::vector<int> ys;
  for (int k = 0; k < 12; ++k) ys.push_back(m.add_binary("y" + std::to_string(k)));
  std::vector<Term> cap;
  for (int k = 0; k < 12; ++k) {
    cap.push_back({ys[k], 3.0 + k});
    m.add_cost(ys[k], -(5.0 + 1.3 * k));
  }
  m.add_row("cap", cap, RowSense::LE, 31.5);
  MilpLimits limits;
  limits.max_nodes = 3;
  const Solution s = solve_milp(m, limits);
  ASSERT_EQ(s.status, SolveStatus::GapLimit);
  if (s.has_incumbent()) {
    EXPECT_GE(s.objective, s.bound - 1e-9);
    EXPECT_LE(check_feasibility(m, s.values).max_row_violation, 1e-7);
  }
  const Solution full = solve_milp(m);
  ASSERT_EQ(full.status, SolveStatus::Optimal);
  EXPECT_LE(s.bound, full.objective + 1e-9);
}

struct RandomMilp {
  MilpModel model;
  oracle::DenseLp dense;
  std::vector<int> binaries;
};

RandomMilp make_random_milp(std::mt19937_64& rng, int nb, int nc, int m) {
  std::uniform_real_distribution<double> coef(-4.0, 4.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RandomMilp out;
  const int n = nb + nc;
  std::vector<double> anchor(n);
  for (int j = 0; j < n; ++j) {
    const bool bin = j < nb;
    if (bin) {
      out.binaries.push_back(out.model.add_binary("y" + std::to_string(j)));
      anchor[j] = unit(rng) < 0.5 ? 0.0 : 1.0;
      out.dense.lower.push_back(0.0);
      out.dense.upper.push_back(1.0);
    } else {
      out.model.add_var("x" + std::to_string(j), 0.0, 5.0);
      anchor[j] = 5.0 * unit(rng);
      out.dense.lower.push_back(0.0);
      out.dense.upper.push_back(5.0);
    }
    const double c = std::round(coef(rng) * 4.0) / 4.0;
    out.model.add_cost(j, c);
    out.dense.cost.push_back(c);
  }
  for (int i = 0; i < m; ++i) {
    std::vector<Term> terms;
    std::vector<double> row(n, 0.0);
    double act = 0.0;
    for (int j = 0; j < n; ++j) {
      if (unit(rng) < 0.4) continue;
      const double a = std::round(coef(rng) * 2.0) / 2.0;
      if (a == 0.0) continue;
      terms.push_back({j, a});
      row[j] = a;
      act += a * anchor[j];
    }
    const bool le = unit(rng) < 0.5;
    const double rhs = le ? act + unit(rng) : act - unit(rng);
    out.model.add_row("r" + std::to_string(i), terms, le ? RowSense::LE : RowSense::GE, rhs);
    out.dense.rows.push_back({row, le ? -1 : 1, rhs});
  }
  return out;
}

/// Independent oracle: enumerate every binary fixing, solve each LP with
/// the dense tableau.
double enumerate_optimum(const RandomMilp& p) {
  const int nb = static_cast<int>(p.binaries.size());
  double best = kInf;
  for (int mask = 0; mask < (1 << nb); ++mask) {
    oracle::DenseLp lp = p.dense;
    for (int k = 0; k < nb; ++k) {
      const double v = (mask >> k) & 1;
      lp.lower[p.binaries[k]] = v;
      lp.upper[p.binaries[k]] = v;
    }
    const auto r = oracle::solve_dense(lp);
    if (r.status == oracle::TableauStatus::Optimal) best = std::min(best, r.objective);
  }
  return best;
}

TEST(SolveMilp, RandomInstancesMatchBinaryEnumeration) {
  std::mt19937_64 rng(424242);
  for (int trial = 0; trial < 60; ++trial) {
    const RandomMilp p = make_random_milp(rng, 5, 3, 5);
    const double ref = enumerate_optimum(p);
    const Solution s = solve_milp(p.model);
    SCOPED_TRACE(trial);
    ASSERT_EQ(s.status, SolveStatus::Optimal);
    EXPECT_NEAR(s.objective, ref, 1e-6 * std::max(1.0, std::abs(ref)));
    // weak duality surrogate
    EXPECT_GE(s.objective, s.bound - 1e-6 * std::max(1.0, std::abs(s.objective)));
    const FeasibilityReport rep = check_feasibility(p.model, s.values);
    EXPECT_LE(rep.max_row_violation, 1e-7);
    EXPECT_LE(rep.max_integrality_violation, 1e-6);
    EXPECT_GE(s.objective, solve_lp(p.model).objective - 1e-9);
  }
}

TEST(SolveMilp, PositiveObjectiveScalingKeepsAssignmentOptimal) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 20; ++trial) {
    RandomMilp p = make_random_milp(rng, 5, 3, 5);
    const Solution base = solve_milp(p.model);
    ASSERT_EQ(base.status, SolveStatus::Optimal);
    constexpr double lambda = 3.7;
    MilpModel scaled = p.model;
    for (auto& t : scaled.objective) t.coef *= lambda;
    const Solution s = solve_milp(scaled);
    ASSERT_EQ(s.status, SolveStatus::Optimal);
    const double tol = 1e-6 * std::max(1.0, std::abs(s.objective));
    EXPECT_NEAR(s.objective, lambda * base.objective, tol);
    EXPECT_NEAR(evaluate_objective(scaled, base.values), s.objective, tol);
  }
}

TEST(SolveMilp, IsDeterministic) {
  std::mt19937_64 rng(5);
  const RandomMilp p = make_random_milp(rng, 6, 3, 6);
  const Solution a = solve_milp(p.model);
  const Solution b = solve_milp(p.model);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.stats.nodes, b.stats.nodes);
  EXPECT_EQ(a.stats.lp_iterations, b.stats.lp_iterations);
}

}  // namespace
}  // namespace orcgrid::milp
