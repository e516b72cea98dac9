#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "orcgrid/milp/model.hpp"
#include "orcgrid/milp/solution.hpp"

namespace orcgrid::milp {

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, FreeZero };

/// Snapshot used to warm-start a later solve.
struct Basis {
  std::vector<VarStatus> status;
  std::vector<int> basic;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

/// Bounded-variable revised simplex on the relaxation of a MilpModel.
///
/// Each row i gets a logical column s_i with a_i x - s_i = 0, so row senses
/// become bounds on s_i. The basis is kept as a sparse LU factorization of
/// the initial basis followed by a product-form eta file, refactorized every
/// `refactor_interval` pivots. Phase 1 minimizes the sum of bound
/// infeasibilities of the basic variables starting from whatever basis is
/// installed, so warm starts after bound changes need no artificials.
class BoundedSimplex {
 public:
  explicit BoundedSimplex(const MilpModel& model, LpOptions options = {});

  void set_var_bounds(int var, double lower, double upper);
  [[nodiscard]] double var_lower(int var) const { return lower_[var]; }
  [[nodiscard]] double var_upper(int var) const { return upper_[var]; }

  LpStatus solve();

  [[nodiscard]] double objective() const;
  [[nodiscard]] std::vector<double> primal() const;
  [[nodiscard]] const std::vector<double>& ray() const { return ray_; }
  /// Phase-1 row multipliers at an infeasible termination.
  [[nodiscard]] const std::vector<double>& farkas() const { return farkas_; }

  [[nodiscard]] Basis basis() const;
  void set_basis(const Basis& basis);

  [[nodiscard]] long iterations() const { return iterations_; }

 private:
  struct Eta {
    int row = 0;
    double pivot = 1.0;
    std::vector<int> index;
    std::vector<double> value;
  };

  struct RatioResult {
    double step = 0.0;
    int leave_pos = -1;
    double leave_value = 0.0;
    bool bound_flip = false;
    bool unbounded = false;
    double pivot = 0.0;
  };

  [[nodiscard]] bool is_structural(int j) const { return j < n_; }
  void column(int j, Eigen::VectorXd& out) const;
  [[nodiscard]] double column_dot(int j, const Eigen::VectorXd& y) const;
  void place_nonbasic(int j);
  void install_slack_basis();
  bool refactor();
  void ensure_factor();
  void recompute_basics();
  void ftran(Eigen::VectorXd& v) const;
  void btran(Eigen::VectorXd& v) const;
  [[nodiscard]] double infeasibility(int j) const;
  RatioResult ratio_test(int entering, int direction,
                         const Eigen::VectorXd& alpha, bool phase1) const;
  void pivot(int entering, int direction, const Eigen::VectorXd& alpha,
             const RatioResult& ratio);

  LpOptions opt_;
  int n_ = 0;
  int m_ = 0;
  std::vector<int> col_start_;
  std::vector<int> row_index_;
  std::vector<double> value_;
  std::vector<double> cost_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> x_;
  std::vector<VarStatus> status_;
  std::vector<int> basic_;
  std::vector<int> position_;

  mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  bool factored_ = false;
  bool values_stale_ = true;

  std::vector<double> ray_;
  std::vector<double> farkas_;
  long iterations_ = 0;
};

}  // namespace orcgrid::milp
