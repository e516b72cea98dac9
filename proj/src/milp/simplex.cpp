#include "orcgrid/milp/simplex.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace orcgrid::milp {

namespace {

constexpr double kEtaDropTol = 1e-14;

}  // namespace

BoundedSimplex::BoundedSimplex(const MilpModel& model, LpOptions options)
    : opt_(options), n_(model.num_vars()), m_(model.num_rows()) {
  const int total = n_ + m_;
  if (opt_.max_iterations <= 0)
    opt_.max_iterations = 50L * total + 10000;

  std::vector<int> count(n_, 0);
  for (const auto& row : model.constraints)
    for (const auto& t : row.terms) ++count[t.var];
  col_start_.assign(n_ + 1, 0);
  for (int j = 0; j < n_; ++j) col_start_[j + 1] = col_start_[j] + count[j];
  row_index_.resize(col_start_[n_]);
  value_.resize(col_start_[n_]);
  std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
  for (int i = 0; i < m_; ++i) {
    for (const auto& t : model.constraints[i].terms) {
      if (t.coef == 0.0) continue;
      const int k = fill[t.var]++;
      row_index_[k] = i;
      value_[k] = t.coef;
    }
  }
  // Zero coefficients were skipped; compact each column.
  {
    int out = 0;
    std::vector<int> start(n_ + 1, 0);
    for (int j = 0; j < n_; ++j) {
      start[j] = out;
      for (int k = col_start_[j]; k < fill[j]; ++k) {
        row_index_[out] = row_index_[k];
        value_[out] = value_[k];
        ++out;
      }
    }
    start[n_] = out;
    row_index_.resize(out);
    value_.resize(out);
    col_start_ = std::move(start);
  }

  cost_.assign(total, 0.0);
  for (const auto& t : model.objective) cost_[t.var] += t.coef;

  lower_.resize(total);
  upper_.resize(total);
  for (int j = 0; j < n_; ++j) {
    lower_[j] = model.vars[j].lower;
    upper_[j] = model.vars[j].upper;
  }
  for (int i = 0; i < m_; ++i) {
    const auto& row = model.constraints[i];
    switch (row.sense) {
      case RowSense::LE:
        lower_[n_ + i] = -kInf;
        upper_[n_ + i] = row.rhs;
        break;
      case RowSense::GE:
        lower_[n_ + i] = row.rhs;
        upper_[n_ + i] = kInf;
        break;
      case RowSense::EQ:
        lower_[n_ + i] = row.rhs;
        upper_[n_ + i] = row.rhs;
        break;
    }
  }
  x_.assign(total, 0.0);
  install_slack_basis();
}

void BoundedSimplex::install_slack_basis() {
  const int total = n_ + m_;
  status_.assign(total, VarStatus::AtLower);
  position_.assign(total, -1);
  basic_.resize(m_);
  for (int j = 0; j < n_; ++j) place_nonbasic(j);
  for (int i = 0; i < m_; ++i) {
    basic_[i] = n_ + i;
    status_[n_ + i] = VarStatus::Basic;
    position_[n_ + i] = i;
  }
  factored_ = false;
  values_stale_ = true;
}

void BoundedSimplex::place_nonbasic(int j) {
  const double lo = lower_[j];
  const double up = upper_[j];
  VarStatus st = status_[j];
  if (st == VarStatus::AtUpper && std::isfinite(up)) {
    x_[j] = up;
    return;
  }
  if (st == VarStatus::AtLower && std::isfinite(lo)) {
    x_[j] = lo;
    return;
  }
  if (std::isfinite(lo)) {
    status_[j] = VarStatus::AtLower;
    x_[j] = lo;
  } else if (std::isfinite(up)) {
    status_[j] = VarStatus::AtUpper;
    x_[j] = up;
  } else {
    status_[j] = VarStatus::FreeZero;
    x_[j] = 0.0;
  }
}

void BoundedSimplex::column(int j, Eigen::VectorXd& out) const {
  out.setZero(m_);
  if (is_structural(j)) {
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k)
      out[row_index_[k]] = value_[k];
  } else {
    out[j - n_] = -1.0;
  }
}

double BoundedSimplex::column_dot(int j, const Eigen::VectorXd& y) const {
  if (!is_structural(j)) return -y[j - n_];
  double s = 0.0;
  for (int k = col_start_[j]; k < col_start_[j + 1]; ++k)
    s += value_[k] * y[row_index_[k]];
  return s;
}

void BoundedSimplex::set_var_bounds(int var, double lower, double upper) {
  lower_[var] = lower;
  upper_[var] = upper;
  if (status_[var] != VarStatus::Basic) {
    place_nonbasic(var);
    values_stale_ = true;
  }
}

bool BoundedSimplex::refactor() {
  etas_.clear();
  factored_ = false;
  if (m_ == 0) {
    factored_ = true;
    return true;
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(m_) * 3);
  for (int r = 0; r < m_; ++r) {
    const int j = basic_[r];
    if (is_structural(j)) {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k)
        triplets.emplace_back(row_index_[k], r, value_[k]);
    } else {
      triplets.emplace_back(j - n_, r, -1.0);
    }
  }
  Eigen::SparseMatrix<double> b(m_, m_);
  b.setFromTriplets(triplets.begin(), triplets.end());
  b.makeCompressed();
  lu_.analyzePattern(b);
  lu_.factorize(b);
  if (lu_.info() != Eigen::Success) return false;
  factored_ = true;
  return true;
}

void BoundedSimplex::ensure_factor() {
  if (factored_) return;
  if (!refactor()) {
    install_slack_basis();
    if (!refactor()) throw NumericalError("slack basis factorization failed");
  }
  values_stale_ = true;
}

void BoundedSimplex::ftran(Eigen::VectorXd& v) const {
  if (m_ == 0) return;
  Eigen::VectorXd w = lu_.solve(v);
  for (const auto& eta : etas_) {
    const double xr = w[eta.row] / eta.pivot;
    if (xr != 0.0) {
      for (std::size_t k = 0; k < eta.index.size(); ++k)
        w[eta.index[k]] -= eta.value[k] * xr;
    }
    w[eta.row] = xr;
  }
  v = std::move(w);
}

void BoundedSimplex::btran(Eigen::VectorXd& v) const {
  if (m_ == 0) return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = v[it->row];
    for (std::size_t k = 0; k < it->index.size(); ++k)
      s -= v[it->index[k]] * it->value[k];
    v[it->row] = s / it->pivot;
  }
  Eigen::VectorXd w = lu_.transpose().solve(v);
  v = std::move(w);
}

void BoundedSimplex::recompute_basics() {
  if (m_ == 0) {
    values_stale_ = false;
    return;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
  for (int j = 0; j < n_ + m_; ++j) {
    if (status_[j] == VarStatus::Basic || x_[j] == 0.0) continue;
    if (is_structural(j)) {
      for (int k = col_start_[j]; k < col_start_[j + 1]; ++k)
        rhs[row_index_[k]] -= value_[k] * x_[j];
    } else {
      rhs[j - n_] += x_[j];
    }
  }
  ftran(rhs);
  for (int r = 0; r < m_; ++r) x_[basic_[r]] = rhs[r];
  values_stale_ = false;
}

double BoundedSimplex::infeasibility(int j) const {
  if (x_[j] < lower_[j] - opt_.primal_tol) return lower_[j] - x_[j];
  if (x_[j] > upper_[j] + opt_.primal_tol) return x_[j] - upper_[j];
  return 0.0;
}

BoundedSimplex::RatioResult BoundedSimplex::ratio_test(
    int entering, int direction, const Eigen::VectorXd& alpha,
    bool phase1) const {
  const double tol = opt_.primal_tol;
  RatioResult res;

  // Pass 1: largest step keeping every blocking variable within its
  // tolerance-relaxed bound.
  double relaxed_max = kInf;
  for (int r = 0; r < m_; ++r) {
    const double a = alpha[r];
    if (std::abs(a) <= opt_.pivot_tol) continue;
    const double rate = -direction * a;
    const int j = basic_[r];
    const double xj = x_[j];
    double limit = kInf;
    if (rate < 0.0) {
      if (phase1 && xj > upper_[j] + tol)
        limit = (xj - upper_[j]) / -rate;
      else if (xj >= lower_[j] - tol && std::isfinite(lower_[j]))
        limit = (xj - lower_[j] + tol) / -rate;
    } else {
      if (phase1 && xj < lower_[j] - tol)
        limit = (lower_[j] - xj) / rate;
      else if (xj <= upper_[j] + tol && std::isfinite(upper_[j]))
        limit = (upper_[j] - xj + tol) / rate;
    }
    relaxed_max = std::min(relaxed_max, limit);
  }

  const double flip_range = upper_[entering] - lower_[entering];
  if (std::isfinite(flip_range) && flip_range <= relaxed_max) {
    res.bound_flip = true;
    res.step = flip_range;
    return res;
  }
  if (!std::isfinite(relaxed_max)) {
    res.unbounded = true;
    return res;
  }

  // Pass 2: among blocking candidates within the relaxed step, pick the
  // largest pivot magnitude.
  double best_pivot = -1.0;
  for (int r = 0; r < m_; ++r) {
    const double a = alpha[r];
    if (std::abs(a) <= opt_.pivot_tol) continue;
    const double rate = -direction * a;
    const int j = basic_[r];
    const double xj = x_[j];
    double exact = kInf;
    double target = 0.0;
    if (rate < 0.0) {
      if (phase1 && xj > upper_[j] + tol) {
        exact = (xj - upper_[j]) / -rate;
        target = upper_[j];
      } else if (xj >= lower_[j] - tol && std::isfinite(lower_[j])) {
        exact = (xj - lower_[j]) / -rate;
        target = lower_[j];
      }
    } else {
      if (phase1 && xj < lower_[j] - tol) {
        exact = (lower_[j] - xj) / rate;
        target = lower_[j];
      } else if (xj <= upper_[j] + tol && std::isfinite(upper_[j])) {
        exact = (upper_[j] - xj) / rate;
        target = upper_[j];
      }
    }
    if (exact <= relaxed_max && std::abs(a) > best_pivot) {
      best_pivot = std::abs(a);
      res.leave_pos = r;
      res.leave_value = target;
      res.step = std::max(exact, 0.0);
      res.pivot = a;
    }
  }
  if (res.leave_pos < 0) res.unbounded = true;
  return res;
}

void BoundedSimplex::pivot(int entering, int direction,
                           const Eigen::VectorXd& alpha,
                           const RatioResult& ratio) {
  const double step = ratio.step;
  if (step != 0.0) {
    for (int r = 0; r < m_; ++r) {
      if (alpha[r] != 0.0) x_[basic_[r]] -= direction * step * alpha[r];
    }
  }
  x_[entering] += direction * step;

  if (ratio.bound_flip) {
    if (direction > 0) {
      status_[entering] = VarStatus::AtUpper;
      x_[entering] = upper_[entering];
    } else {
      status_[entering] = VarStatus::AtLower;
      x_[entering] = lower_[entering];
    }
    return;
  }

  const int r = ratio.leave_pos;
  const int leaving = basic_[r];
  x_[leaving] = ratio.leave_value;
  if (ratio.leave_value == upper_[leaving] &&
      lower_[leaving] != upper_[leaving])
    status_[leaving] = VarStatus::AtUpper;
  else
    status_[leaving] = VarStatus::AtLower;
  position_[leaving] = -1;

  basic_[r] = entering;
  position_[entering] = r;
  status_[entering] = VarStatus::Basic;

  Eta eta;
  eta.row = r;
  eta.pivot = alpha[r];
  for (int i = 0; i < m_; ++i) {
    if (i == r) continue;
    if (std::abs(alpha[i]) > kEtaDropTol) {
      eta.index.push_back(i);
      eta.value.push_back(alpha[i]);
    }
  }
  etas_.push_back(std::move(eta));
}

LpStatus BoundedSimplex::solve() {
  ray_.clear();
  farkas_.clear();
  ensure_factor();
  if (values_stale_) recompute_basics();

  const int total = n_ + m_;
  const long stall_limit = 2L * total;
  long stalled = 0;
  bool bland = false;
  bool verified = false;
  int bad_pivots = 0;
  double last_progress = kInf;
  bool last_phase1 = true;

  Eigen::VectorXd y(m_);
  Eigen::VectorXd alpha(m_);

  for (long local_iter = 0;; ++local_iter) {
    if (local_iter >= opt_.max_iterations) return LpStatus::IterationLimit;
    if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) {
      if (!refactor()) {
        install_slack_basis();
        ensure_factor();
      }
      recompute_basics();
    }

    double sum_inf = 0.0;
    for (int r = 0; r < m_; ++r) sum_inf += infeasibility(basic_[r]);
    const bool phase1 = sum_inf > 0.0;

    for (int r = 0; r < m_; ++r) {
      const int j = basic_[r];
      if (phase1) {
        if (x_[j] < lower_[j] - opt_.primal_tol)
          y[r] = -1.0;
        else if (x_[j] > upper_[j] + opt_.primal_tol)
          y[r] = 1.0;
        else
          y[r] = 0.0;
      } else {
        y[r] = cost_[j];
      }
    }
    btran(y);

    const double progress = phase1 ? sum_inf : objective();
    if (phase1 != last_phase1) {
      stalled = 0;
      bland = false;
    } else if (progress < last_progress - 1e-12 * std::max(1.0, std::abs(last_progress))) {
      stalled = 0;
      bland = false;
    } else if (++stalled > stall_limit) {
      bland = true;
    }
    last_progress = progress;
    last_phase1 = phase1;

    int entering = -1;
    int direction = 0;
    double best = 0.0;
    for (int j = 0; j < total; ++j) {
      const VarStatus st = status_[j];
      if (st == VarStatus::Basic) continue;
      if (lower_[j] == upper_[j]) continue;
      const double d = (phase1 ? 0.0 : cost_[j]) - column_dot(j, y);
      int dir = 0;
      if (st == VarStatus::AtLower && d < -opt_.dual_tol)
        dir = 1;
      else if (st == VarStatus::AtUpper && d > opt_.dual_tol)
        dir = -1;
      else if (st == VarStatus::FreeZero && std::abs(d) > opt_.dual_tol)
        dir = d < 0.0 ? 1 : -1;
      if (dir == 0) continue;
      if (bland) {
        entering = j;
        direction = dir;
        break;
      }
      if (std::abs(d) > best) {
        best = std::abs(d);
        entering = j;
        direction = dir;
      }
    }

    if (entering < 0) {
      // Confirm against a fresh factorization before declaring termination.
      if (!verified && !etas_.empty()) {
        verified = true;
        if (!refactor()) {
          install_slack_basis();
          ensure_factor();
        }
        recompute_basics();
        continue;
      }
      if (phase1) {
        farkas_.assign(y.data(), y.data() + m_);
        return LpStatus::Infeasible;
      }
      return LpStatus::Optimal;
    }
    verified = false;

    column(entering, alpha);
    ftran(alpha);
    RatioResult ratio = ratio_test(entering, direction, alpha, phase1);

    if (ratio.unbounded) {
      if (!phase1) {
        ray_.assign(n_, 0.0);
        if (entering < n_) ray_[entering] = direction;
        for (int r = 0; r < m_; ++r)
          if (basic_[r] < n_) ray_[basic_[r]] = -direction * alpha[r];
        return LpStatus::Unbounded;
      }
      // A phase-1 improving ray always meets an infeasible breakpoint;
      // reaching here means the factorization drifted.
      if (++bad_pivots > 3)
        throw NumericalError("phase-1 ratio test found no breakpoint");
      refactor();
      recompute_basics();
      continue;
    }

    if (!ratio.bound_flip && std::abs(ratio.pivot) < opt_.pivot_tol * 10.0) {
      if (!bland) {
        bland = true;
        ++bad_pivots;
        continue;
      }
      if (++bad_pivots > 3)
        throw NumericalError(fmt::format(
            "pivot magnitude {:.3g} below tolerance", std::abs(ratio.pivot)));
    }

    pivot(entering, direction, alpha, ratio);
    ++iterations_;
  }
}

double BoundedSimplex::objective() const {
  double obj = 0.0;
  for (int j = 0; j < n_; ++j) obj += cost_[j] * x_[j];
  return obj;
}

std::vector<double> BoundedSimplex::primal() const {
  std::vector<double> out(x_.begin(), x_.begin() + n_);
  for (int j = 0; j < n_; ++j)
    out[j] = std::clamp(out[j], lower_[j], upper_[j]);
  return out;
}

Basis BoundedSimplex::basis() const { return Basis{status_, basic_}; }

void BoundedSimplex::set_basis(const Basis& basis) {
  status_ = basis.status;
  basic_ = basis.basic;
  position_.assign(n_ + m_, -1);
  for (int r = 0; r < m_; ++r) position_[basic_[r]] = r;
  for (int j = 0; j < n_ + m_; ++j)
    if (status_[j] != VarStatus::Basic) place_nonbasic(j);
  factored_ = false;
  values_stale_ = true;
}

}  // namespace orcgrid::milp
