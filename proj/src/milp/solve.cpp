#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>

#include "orcgrid/milp/simplex.hpp"
#include "orcgrid/milp/solution.hpp"

namespace orcgrid::milp {

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal:
      return "Optimal";
    case SolveStatus::Infeasible:
      return "Infeasible";
    case SolveStatus::Unbounded:
      return "Unbounded";
    case SolveStatus::GapLimit:
      return "GapLimit";
  }
  return "Unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

LpStatus solve_checked(BoundedSimplex& lp) {
  const LpStatus st = lp.solve();
  if (st == LpStatus::IterationLimit)
    throw NumericalError("simplex iteration limit reached");
  return st;
}

bool rows_infeasible(const MilpModel& model, const std::vector<int>& rows,
                     const LpOptions& options) {
  MilpModel sub;
  sub.vars = model.vars;
  for (int i : rows) sub.constraints.push_back(model.constraints[i]);
  BoundedSimplex lp(sub, options);
  return solve_checked(lp) == LpStatus::Infeasible;
}

/// Deletion filter over the rows carrying a nonzero phase-1 multiplier.
std::vector<std::string> conflict_rows(const MilpModel& model,
                                       const std::vector<double>& farkas,
                                       const LpOptions& options) {
  constexpr std::size_t kMaxCandidates = 64;
  std::vector<int> candidates;
  for (int i = 0; i < static_cast<int>(farkas.size()); ++i)
    if (std::abs(farkas[i]) > 1e-9) candidates.push_back(i);

  std::vector<std::string> names;
  if (candidates.size() <= kMaxCandidates &&
      rows_infeasible(model, candidates, options)) {
    for (std::size_t k = 0; k < candidates.size();) {
      std::vector<int> trial = candidates;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(k));
      if (rows_infeasible(model, trial, options))
        candidates = std::move(trial);
      else
        ++k;
    }
  }
  for (int i : candidates) names.push_back(model.constraints[i].name);
  return names;
}

Solution lp_solution(const MilpModel& model, BoundedSimplex& lp, LpStatus st,
                     const LpOptions& options) {
  Solution sol;
  sol.stats.lp_iterations = lp.iterations();
  sol.stats.nodes = 1;
  switch (st) {
    case LpStatus::Optimal:
      sol.status = SolveStatus::Optimal;
      sol.values = lp.primal();
      sol.objective = evaluate_objective(model, sol.values);
      sol.bound = sol.objective;
      sol.gap = 0.0;
      break;
    case LpStatus::Infeasible:
      sol.status = SolveStatus::Infeasible;
      sol.conflict_rows = conflict_rows(model, lp.farkas(), options);
      break;
    case LpStatus::Unbounded:
      sol.status = SolveStatus::Unbounded;
      sol.objective = -kInf;
      sol.ray = lp.ray();
      break;
    case LpStatus::IterationLimit:
      throw NumericalError("simplex iteration limit reached");
  }
  return sol;
}

bool is_integral(const std::vector<double>& values,
                 const std::vector<int>& binaries) {
  for (int j : binaries)
    if (std::abs(values[j] - std::round(values[j])) > kIntegralityTol)
      return false;
  return true;
}

bool is_exactly_integral(const std::vector<double>& values,
                         const std::vector<int>& binaries) {
  for (int j : binaries)
    if (values[j] != 0.0 && values[j] != 1.0) return false;
  return true;
}

struct Node {
  std::vector<std::pair<int, double>> fixings;
  Basis basis;
  std::vector<double> values;
  double bound = -kInf;
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& model, const MilpLimits& limits,
                 const LpOptions& options)
      : model_(model),
        limits_(limits),
        options_(options),
        lp_(model, options),
        binaries_(model.binary_vars()) {}

  Solution run();

 private:
  void apply_fixings(const std::vector<std::pair<int, double>>& fixings) {
    for (int j : binaries_)
      lp_.set_var_bounds(j, model_.vars[j].lower, model_.vars[j].upper);
    for (const auto& [j, v] : fixings) lp_.set_var_bounds(j, v, v);
  }

  [[nodiscard]] double cutoff() const {
    if (!incumbent_) return kInf;
    return incumbent_obj_ - limits_.rel_gap * std::max(1.0, std::abs(incumbent_obj_));
  }

  int select_branch(const std::vector<double>& values) const {
    int best = -1;
    double best_dist = kInf;
    for (int j : binaries_) {
      const double frac = values[j] - std::floor(values[j]);
      if (frac <= kIntegralityTol || frac >= 1.0 - kIntegralityTol) continue;
      const double dist = std::abs(frac - 0.5);
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    return best;
  }

  void offer_incumbent(std::vector<double> values, double obj) {
    if (!incumbent_ || obj < incumbent_obj_) {
      incumbent_ = std::move(values);
      incumbent_obj_ = obj;
    }
  }

  Solution polish(Solution sol);

  const MilpModel& model_;
  MilpLimits limits_;
  LpOptions options_;
  BoundedSimplex lp_;
  std::vector<int> binaries_;
  std::optional<std::vector<double>> incumbent_;
  double incumbent_obj_ = kInf;
  double gap_pruned_bound_ = kInf;
  long nodes_ = 0;
};

Solution BranchAndBound::polish(Solution sol) {
  if (is_exactly_integral(sol.values, binaries_)) return sol;
  std::vector<std::pair<int, double>> fixings;
  for (int j : binaries_) fixings.emplace_back(j, std::round(sol.values[j]));
  apply_fixings(fixings);
  if (solve_checked(lp_) == LpStatus::Optimal) {
    std::vector<double> values = lp_.primal();
    for (int j : binaries_) values[j] = std::round(values[j]);
    const double obj = evaluate_objective(model_, values);
    if (obj <= sol.objective + 1e-9 * std::max(1.0, std::abs(sol.objective))) {
      sol.values = std::move(values);
      sol.objective = obj;
      sol.bound = std::min(sol.bound, obj);
    }
  }
  return sol;
}

Solution BranchAndBound::run() {
  const auto start = Clock::now();
  const LpStatus root_status = solve_checked(lp_);
  nodes_ = 1;
  if (root_status != LpStatus::Optimal) {
    Solution sol = lp_solution(model_, lp_, root_status, options_);
    sol.stats.wall_seconds = seconds_since(start);
    return sol;
  }

  Node root;
  root.values = lp_.primal();
  root.bound = evaluate_objective(model_, root.values);
  root.basis = lp_.basis();
  const double root_bound = root.bound;

  std::vector<Node> open;
  if (is_integral(root.values, binaries_)) {
    offer_incumbent(root.values, root.bound);
  } else {
    open.push_back(std::move(root));
  }

  bool limit_hit = false;
  long processed = 0;
  while (!open.empty()) {
    if (nodes_ >= limits_.max_nodes ||
        seconds_since(start) > limits_.time_seconds) {
      limit_hit = true;
      break;
    }
    if (processed > 0 && processed % 64 == 0) {
      std::stable_sort(open.begin(), open.end(),
                       [](const Node& a, const Node& b) { return a.bound > b.bound; });
    }
    Node node = std::move(open.back());
    open.pop_back();
    ++processed;
    if (node.bound >= cutoff()) {
      gap_pruned_bound_ = std::min(gap_pruned_bound_, node.bound);
      continue;
    }

    const int var = select_branch(node.values);
    std::vector<Node> children;
    for (const double side : {0.0, 1.0}) {
      Node child;
      child.fixings = node.fixings;
      child.fixings.emplace_back(var, side);
      apply_fixings(child.fixings);
      lp_.set_basis(node.basis);
      const LpStatus st = solve_checked(lp_);
      ++nodes_;
      if (st == LpStatus::Infeasible) continue;
      if (st == LpStatus::Unbounded)
        throw NumericalError("node relaxation unbounded under a bounded root");
      child.values = lp_.primal();
      child.bound = evaluate_objective(model_, child.values);
      if (child.bound >= cutoff()) {
        gap_pruned_bound_ = std::min(gap_pruned_bound_, child.bound);
        continue;
      }
      if (is_integral(child.values, binaries_)) {
        offer_incumbent(child.values, child.bound);
        continue;
      }
      child.basis = lp_.basis();
      children.push_back(std::move(child));
    }
    // Better child on top of the stack; equal bounds prefer the up branch.
    if (children.size() == 2 && children[1].bound > children[0].bound)
      std::swap(children[0], children[1]);
    for (auto& c : children) open.push_back(std::move(c));
  }

  Solution sol;
  sol.stats.nodes = nodes_;
  double open_bound = kInf;
  for (const auto& n : open) open_bound = std::min(open_bound, n.bound);
  if (!incumbent_) {
    sol.status = limit_hit ? SolveStatus::GapLimit : SolveStatus::Infeasible;
    sol.bound = limit_hit ? std::min(open_bound, gap_pruned_bound_) : kInf;
    if (!limit_hit)
      sol.conflict_rows.push_back("no assignment of the binary variables is feasible");
  } else {
    sol.values = *incumbent_;
    sol.objective = incumbent_obj_;
    sol.bound = std::min({incumbent_obj_, open_bound, gap_pruned_bound_});
    sol.bound = std::max(sol.bound, root_bound);
    sol = polish(std::move(sol));
    sol.gap = (sol.objective - sol.bound) / std::max(1.0, std::abs(sol.objective));
    sol.status = (limit_hit && sol.gap > limits_.rel_gap) ? SolveStatus::GapLimit
                                                          : SolveStatus::Optimal;
  }
  sol.stats.lp_iterations = lp_.iterations();
  sol.stats.wall_seconds = seconds_since(start);
  return sol;
}

}  // namespace

Solution solve_lp(const MilpModel& model, const LpOptions& options) {
  check_model(model);
  const auto start = Clock::now();
  BoundedSimplex lp(model, options);
  const LpStatus st = solve_checked(lp);
  Solution sol = lp_solution(model, lp, st, options);
  sol.stats.wall_seconds = seconds_since(start);
  return sol;
}

Solution solve_milp(const MilpModel& model, const MilpLimits& limits,
                    const LpOptions& options) {
  check_model(model);
  BranchAndBound bnb(model, limits, options);
  return bnb.run();
}

}  // namespace orcgrid::milp
