// Copyright 2026 The backhaul-planner Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "backhaul/milp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "backhaul/kernels/kernels.hpp"

namespace backhaul::milp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kDegenStep = 1e-10;
constexpr int kDegenStreakLimit = 180;
constexpr int kRefactorEvery = 100;

namespace kern = backhaul::kernels;

enum class VStat : unsigned char { AtLower, AtUpper, Basic, Free };

// One simplex run over a fixed active-row set. The caller (solve_lp) owns
// the lazy-row activation loop and re-instantiates this with a grown set.
class Tableau {
 public:
  Tableau(const MilpModel& model, std::span<const double> lo, std::span<const double> hi,
          const std::vector<int>& active_rows, const LpOptions& opts)
      : model_(model), opts_(opts), active_(active_rows) {
    n_ = model.num_vars();
    m_ = static_cast<int>(active_.size());
    build(lo, hi);
  }

  LpStatus run();

  // Structural solution after run() returned Optimal.
  std::vector<double> solution() const {
    std::vector<double> x(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) x[static_cast<std::size_t>(j)] = value_of(j);
    return x;
  }
  int iterations() const { return iters_; }
  // Unbounded ray over structural columns (improving direction).
  const std::vector<double>& ray() const { return ray_; }

 private:
  void build(std::span<const double> lo, std::span<const double> hi);
  bool refactor();
  void recompute_basics();
  LpStatus make_feasible();                 // phase 1
  LpStatus optimize(bool phase1);           // shared simplex loop
  double reduced_cost(int j, const std::vector<double>& y) const;
  void compute_duals(std::vector<double>* y) const;
  void ftran(int j, std::vector<double>* w) const;
  double value_of(int j) const;
  double cost_of(int j) const { return phase1_mode_ ? phase1_cost(j) : real_cost(j); }
  double real_cost(int j) const {
    return j < n_ ? model_.objective()[static_cast<std::size_t>(j)] : 0.0;
  }
  double phase1_cost(int j) const { return j >= n_ + m_ ? 1.0 : 0.0; }

  const MilpModel& model_;
  LpOptions opts_;
  std::vector<int> active_;
  int n_ = 0;  // structural
  int m_ = 0;  // active rows (== logicals)
  int total_ = 0;  // n + m + artificials

  // columns over active row positions, for structural vars only; logicals
  // and artificials are unit columns described by art_sign_/row index.
  std::vector<std::vector<RowEntry>> cols_;
  std::vector<double> rhs_;
  std::vector<double> vlo_, vhi_;
  std::vector<double> art_sign_;  // per artificial (index total-n-m)
  std::vector<int> art_row_;

  std::vector<int> basic_;        // row pos -> var
  std::vector<VStat> stat_;       // var -> status
  std::vector<double> xb_;        // row pos -> basic value
  std::vector<double> binv_;      // column-major m x m
  bool phase1_mode_ = false;
  int iters_ = 0;
  int pivots_since_refactor_ = 0;
  int degen_streak_ = 0;
  bool bland_ = false;
  std::vector<double> ray_;

  std::vector<double> work_y_, work_w_;
};

double Tableau::value_of(int j) const {
  switch (stat_[static_cast<std::size_t>(j)]) {
    case VStat::AtLower: return vlo_[static_cast<std::size_t>(j)];
    case VStat::AtUpper: return vhi_[static_cast<std::size_t>(j)];
    case VStat::Free: return 0.0;
    case VStat::Basic:
      for (int i = 0; i < m_; ++i)
        if (basic_[static_cast<std::size_t>(i)] == j) return xb_[static_cast<std::size_t>(i)];
      return 0.0;
  }
  return 0.0;
}

void Tableau::build(std::span<const double> lo, std::span<const double> hi) {
  cols_.assign(static_cast<std::size_t>(n_), {});
  rhs_.assign(static_cast<std::size_t>(m_), 0.0);
  vlo_.assign(static_cast<std::size_t>(n_ + m_), 0.0);
  vhi_.assign(static_cast<std::size_t>(n_ + m_), 0.0);

  for (int j = 0; j < n_; ++j) {
    vlo_[static_cast<std::size_t>(j)] = lo.empty() ? model_.var(j).lo : lo[static_cast<std::size_t>(j)];
    vhi_[static_cast<std::size_t>(j)] = hi.empty() ? model_.var(j).hi : hi[static_cast<std::size_t>(j)];
  }
  for (int pos = 0; pos < m_; ++pos) {
    const Row& row = model_.rows()[static_cast<std::size_t>(active_[static_cast<std::size_t>(pos)])];
    rhs_[static_cast<std::size_t>(pos)] = row.rhs;
    for (const RowEntry& e : row.terms)
      cols_[static_cast<std::size_t>(e.column)].push_back(RowEntry{pos, e.coeff});
    const int logical = n_ + pos;
    switch (row.sense) {
      case RowSense::LessEqual:
        vlo_[static_cast<std::size_t>(logical)] = 0.0;
        vhi_[static_cast<std::size_t>(logical)] = kInf;
        break;
      case RowSense::GreaterEqual:
        vlo_[static_cast<std::size_t>(logical)] = -kInf;
        vhi_[static_cast<std::size_t>(logical)] = 0.0;
        break;
      case RowSense::Equal:
        vlo_[static_cast<std::size_t>(logical)] = 0.0;
        vhi_[static_cast<std::size_t>(logical)] = 0.0;
        break;
    }
  }
  total_ = n_ + m_;

  // Start from the all-logical basis with structurals at a finite bound.
  basic_.resize(static_cast<std::size_t>(m_));
  stat_.assign(static_cast<std::size_t>(total_), VStat::AtLower);
  for (int j = 0; j < total_; ++j) {
    if (std::isfinite(vlo_[static_cast<std::size_t>(j)]))
      stat_[static_cast<std::size_t>(j)] = VStat::AtLower;
    else if (std::isfinite(vhi_[static_cast<std::size_t>(j)]))
      stat_[static_cast<std::size_t>(j)] = VStat::AtUpper;
    else
      stat_[static_cast<std::size_t>(j)] = VStat::Free;
  }
  for (int pos = 0; pos < m_; ++pos) {
    basic_[static_cast<std::size_t>(pos)] = n_ + pos;
    stat_[static_cast<std::size_t>(n_ + pos)] = VStat::Basic;
  }
  binv_.assign(static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_), 0.0);
  for (int i = 0; i < m_; ++i)
    binv_[static_cast<std::size_t>(i) * static_cast<std::size_t>(m_) + static_cast<std::size_t>(i)] = 1.0;
  xb_.assign(static_cast<std::size_t>(m_), 0.0);
  recompute_basics();
  work_y_.resize(static_cast<std::size_t>(m_));
  work_w_.resize(static_cast<std::size_t>(m_));
}

void Tableau::recompute_basics() {
  // xb = Binv (rhs - N x_N)
  std::vector<double> r = rhs_;
  for (int j = 0; j < total_; ++j) {
    if (stat_[static_cast<std::size_t>(j)] == VStat::Basic) continue;
    const double v = value_of(j);
    if (v == 0.0) continue;
    if (j < n_) {
      for (const RowEntry& e : cols_[static_cast<std::size_t>(j)])
        r[static_cast<std::size_t>(e.column)] -= e.coeff * v;
    } else if (j < n_ + m_) {
      r[static_cast<std::size_t>(j - n_)] -= v;
    } else {
      r[static_cast<std::size_t>(art_row_[static_cast<std::size_t>(j - n_ - m_)])] -=
          art_sign_[static_cast<std::size_t>(j - n_ - m_)] * v;
    }
  }
  std::fill(xb_.begin(), xb_.end(), 0.0);
  const std::size_t m = static_cast<std::size_t>(m_);
  for (int k = 0; k < m_; ++k) {
    const double rk = r[static_cast<std::size_t>(k)];
    if (rk == 0.0) continue;
    kern::ops().axpy(rk, binv_.data() + static_cast<std::size_t>(k) * m, xb_.data(), m);
  }
}

bool Tableau::refactor() {
  // Rebuild Binv from the basis columns with Gauss-Jordan elimination,
  // row-major work arrays so eliminations are contiguous.
  const std::size_t m = static_cast<std::size_t>(m_);
  std::vector<double> a(m * m, 0.0), inv(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) inv[i * m + i] = 1.0;
  for (int pos = 0; pos < m_; ++pos) {
    const int j = basic_[static_cast<std::size_t>(pos)];
    if (j < n_) {
      for (const RowEntry& e : cols_[static_cast<std::size_t>(j)])
        a[static_cast<std::size_t>(e.column) * m + static_cast<std::size_t>(pos)] = e.coeff;
    } else if (j < n_ + m_) {
      a[static_cast<std::size_t>(j - n_) * m + static_cast<std::size_t>(pos)] = 1.0;
    } else {
      const int t = j - n_ - m_;
      a[static_cast<std::size_t>(art_row_[static_cast<std::size_t>(t)]) * m +
        static_cast<std::size_t>(pos)] = art_sign_[static_cast<std::size_t>(t)];
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t piv = k;
    double best = std::fabs(a[k * m + k]);
    for (std::size_t i = k + 1; i < m; ++i) {
      const double v = std::fabs(a[i * m + k]);
      if (v > best) { best = v; piv = i; }
    }
    if (best < 1e-12) return false;
    if (piv != k) {
      for (std::size_t c = 0; c < m; ++c) {
        std::swap(a[piv * m + c], a[k * m + c]);
        std::swap(inv[piv * m + c], inv[k * m + c]);
      }
    }
    const double scale = 1.0 / a[k * m + k];
    kern::ops().scale(scale, a.data() + k * m, m);
    kern::ops().scale(scale, inv.data() + k * m, m);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == k) continue;
      const double f = a[i * m + k];
      if (f == 0.0) continue;
      kern::ops().axpy(-f, a.data() + k * m, a.data() + i * m, m);
      kern::ops().axpy(-f, inv.data() + k * m, inv.data() + i * m, m);
    }
  }
  // inv is row-major Binv; store column-major.
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k)
      binv_[k * m + i] = inv[i * m + k];
  pivots_since_refactor_ = 0;
  return true;
}

void Tableau::compute_duals(std::vector<double>* y) const {
  const std::size_t m = static_cast<std::size_t>(m_);
  std::vector<double> cb(m, 0.0);
  bool any = false;
  for (int i = 0; i < m_; ++i) {
    const double c = cost_of(basic_[static_cast<std::size_t>(i)]);
    cb[static_cast<std::size_t>(i)] = c;
    any = any || c != 0.0;
  }
  y->assign(m, 0.0);
  if (!any) return;
  for (std::size_t k = 0; k < m; ++k)
    (*y)[k] = kern::ops().dot(binv_.data() + k * m, cb.data(), m);
}

double Tableau::reduced_cost(int j, const std::vector<double>& y) const {
  double d = cost_of(j);
  if (j < n_) {
    for (const RowEntry& e : cols_[static_cast<std::size_t>(j)])
      d -= y[static_cast<std::size_t>(e.column)] * e.coeff;
  } else if (j < n_ + m_) {
    d -= y[static_cast<std::size_t>(j - n_)];
  } else {
    const int t = j - n_ - m_;
    d -= y[static_cast<std::size_t>(art_row_[static_cast<std::size_t>(t)])] *
         art_sign_[static_cast<std::size_t>(t)];
  }
  return d;
}

void Tableau::ftran(int j, std::vector<double>* w) const {
  const std::size_t m = static_cast<std::size_t>(m_);
  w->assign(m, 0.0);
  if (j < n_) {
    for (const RowEntry& e : cols_[static_cast<std::size_t>(j)])
      kern::ops().axpy(e.coeff, binv_.data() + static_cast<std::size_t>(e.column) * m,
                       w->data(), m);
  } else if (j < n_ + m_) {
    const std::size_t k = static_cast<std::size_t>(j - n_);
    for (std::size_t i = 0; i < m; ++i) (*w)[i] = binv_[k * m + i];
  } else {
    const int t = j - n_ - m_;
    const std::size_t k = static_cast<std::size_t>(art_row_[static_cast<std::size_t>(t)]);
    const double s = art_sign_[static_cast<std::size_t>(t)];
    for (std::size_t i = 0; i < m; ++i) (*w)[i] = s * binv_[k * m + i];
  }
}

LpStatus Tableau::make_feasible() {
  // Replace out-of-bound basic logicals with artificials carrying the
  // residual, then minimize the artificial sum.
  double max_violation = 0.0;
  for (int pass = 0; pass < m_ + 1; ++pass) {
    int worst = -1;
    double worst_v = opts_.feas_tol;
    for (int i = 0; i < m_; ++i) {
      const int j = basic_[static_cast<std::size_t>(i)];
      const double v = xb_[static_cast<std::size_t>(i)];
      const double below = vlo_[static_cast<std::size_t>(j)] - v;
      const double above = v - vhi_[static_cast<std::size_t>(j)];
      const double viol = std::max(below, above);
      if (viol > worst_v) { worst_v = viol; worst = i; }
    }
    if (worst < 0) break;
    max_violation = std::max(max_violation, worst_v);
    const int j = basic_[static_cast<std::size_t>(worst)];
    // Clamp the offender to its nearest bound and hand the row to a fresh
    // artificial.
    const double v = xb_[static_cast<std::size_t>(worst)];
    stat_[static_cast<std::size_t>(j)] =
        (v < vlo_[static_cast<std::size_t>(j)]) ? VStat::AtLower : VStat::AtUpper;
    const int art_index = total_;
    art_row_.push_back(worst);
    art_sign_.push_back(1.0);  // fixed up after recompute
    vlo_.push_back(0.0);
    vhi_.push_back(kInf);
    stat_.push_back(VStat::Basic);
    basic_[static_cast<std::size_t>(worst)] = art_index;
    ++total_;
    if (!refactor()) return LpStatus::NumericalBreakdown;
    recompute_basics();
    // Choose the artificial sign so its basic value is nonnegative.
    const double res = xb_[static_cast<std::size_t>(worst)];
    if (res < 0.0) {
      art_sign_.back() = -1.0;
      if (!refactor()) return LpStatus::NumericalBreakdown;
      recompute_basics();
    }
  }
  if (art_row_.empty() && max_violation <= opts_.feas_tol) return LpStatus::Optimal;

  phase1_mode_ = true;
  const LpStatus st = optimize(true);
  phase1_mode_ = false;
  if (st != LpStatus::Optimal) return st;

  double infeas = 0.0;
  for (int i = 0; i < m_; ++i) {
    if (basic_[static_cast<std::size_t>(i)] >= n_ + m_)
      infeas += std::max(0.0, xb_[static_cast<std::size_t>(i)]);
  }
  double scale = 1.0;
  for (double b : rhs_) scale = std::max(scale, std::fabs(b));
  if (infeas > opts_.feas_tol * scale * 10.0) return LpStatus::Infeasible;

  // Lock artificials at zero so phase 2 cannot reuse them.
  for (int t = 0; t < total_ - n_ - m_; ++t) {
    const int j = n_ + m_ + t;
    vlo_[static_cast<std::size_t>(j)] = 0.0;
    vhi_[static_cast<std::size_t>(j)] = 0.0;
    if (stat_[static_cast<std::size_t>(j)] != VStat::Basic)
      stat_[static_cast<std::size_t>(j)] = VStat::AtLower;
  }
  return LpStatus::Optimal;
}

LpStatus Tableau::optimize(bool phase1) {
  const int max_iters =
      opts_.max_iters > 0 ? opts_.max_iters : 2000 + 200 * (n_ + m_);
  std::vector<double>& y = work_y_;
  std::vector<double>& w = work_w_;

  while (true) {
    if (iters_ >= max_iters) return LpStatus::IterationLimit;
    if (pivots_since_refactor_ >= kRefactorEvery) {
      if (!refactor()) return LpStatus::NumericalBreakdown;
      recompute_basics();
    }

    compute_duals(&y);

    // Pricing.
    int enter = -1, dir = 0;
    double best_score = opts_.opt_tol;
    for (int j = 0; j < total_; ++j) {
      const VStat s = stat_[static_cast<std::size_t>(j)];
      if (s == VStat::Basic) continue;
      if (vlo_[static_cast<std::size_t>(j)] == vhi_[static_cast<std::size_t>(j)]) continue;
      const double d = reduced_cost(j, y);
      int cand_dir = 0;
      if (s == VStat::AtLower && d < -opts_.opt_tol) cand_dir = +1;
      else if (s == VStat::AtUpper && d > opts_.opt_tol) cand_dir = -1;
      else if (s == VStat::Free && std::fabs(d) > opts_.opt_tol) cand_dir = d < 0 ? +1 : -1;
      if (cand_dir == 0) continue;
      if (bland_) { enter = j; dir = cand_dir; break; }
      const double score = std::fabs(d);
      if (score > best_score + 1e-15) { best_score = score; enter = j; dir = cand_dir; }
    }
    if (enter < 0) {
      // Verify on a fresh factorization before declaring optimality.
      if (pivots_since_refactor_ > 0) {
        if (!refactor()) return LpStatus::NumericalBreakdown;
        recompute_basics();
        compute_duals(&y);
        bool still = true;
        for (int j = 0; j < total_ && still; ++j) {
          const VStat s = stat_[static_cast<std::size_t>(j)];
          if (s == VStat::Basic) continue;
          if (vlo_[static_cast<std::size_t>(j)] == vhi_[static_cast<std::size_t>(j)]) continue;
          const double d = reduced_cost(j, y);
          if ((s == VStat::AtLower && d < -opts_.opt_tol * 10) ||
              (s == VStat::AtUpper && d > opts_.opt_tol * 10) ||
              (s == VStat::Free && std::fabs(d) > opts_.opt_tol * 10))
            still = false;
        }
        if (!still) continue;  // resume with clean factors
      }
      return LpStatus::Optimal;
    }

    ftran(enter, &w);

    // Ratio test.
    double t_best = vhi_[static_cast<std::size_t>(enter)] - vlo_[static_cast<std::size_t>(enter)];
    if (stat_[static_cast<std::size_t>(enter)] == VStat::Free) t_best = kInf;
    int leave_pos = -1;
    double leave_piv = 0.0;
    int leave_to_lower = 0;
    for (int i = 0; i < m_; ++i) {
      const double delta = dir * w[static_cast<std::size_t>(i)];
      const int bj = basic_[static_cast<std::size_t>(i)];
      double limit;
      int to_lower;
      if (delta > kPivotTol) {
        if (!std::isfinite(vlo_[static_cast<std::size_t>(bj)])) continue;
        limit = (xb_[static_cast<std::size_t>(i)] - vlo_[static_cast<std::size_t>(bj)]) / delta;
        to_lower = 1;
      } else if (delta < -kPivotTol) {
        if (!std::isfinite(vhi_[static_cast<std::size_t>(bj)])) continue;
        limit = (xb_[static_cast<std::size_t>(i)] - vhi_[static_cast<std::size_t>(bj)]) / delta;
        to_lower = 0;
      } else {
        continue;
      }
      if (limit < 0.0) limit = 0.0;
      bool take = false;
      if (limit < t_best - 1e-12) {
        take = true;
      } else if (limit <= t_best + 1e-12 && leave_pos >= 0) {
        if (bland_) {
          take = basic_[static_cast<std::size_t>(i)] < basic_[static_cast<std::size_t>(leave_pos)];
        } else {
          take = std::fabs(w[static_cast<std::size_t>(i)]) > std::fabs(leave_piv);
        }
      } else if (limit <= t_best + 1e-12 && leave_pos < 0 && limit <= t_best) {
        take = true;
      }
      if (take) {
        t_best = std::min(t_best, limit);
        leave_pos = i;
        leave_piv = w[static_cast<std::size_t>(i)];
        leave_to_lower = to_lower;
      }
    }

    if (!std::isfinite(t_best)) {
      // Improving ray: entering moves dir, basics move -dir*w.
      ray_.assign(static_cast<std::size_t>(n_), 0.0);
      if (enter < n_) ray_[static_cast<std::size_t>(enter)] = dir;
      for (int i = 0; i < m_; ++i) {
        const int bj = basic_[static_cast<std::size_t>(i)];
        if (bj < n_) ray_[static_cast<std::size_t>(bj)] -= dir * w[static_cast<std::size_t>(i)];
      }
      return LpStatus::Unbounded;
    }

    ++iters_;
    if (t_best <= kDegenStep) {
      if (++degen_streak_ > kDegenStreakLimit) bland_ = true;
    } else {
      degen_streak_ = 0;
      bland_ = false;
    }

    if (leave_pos < 0) {
      // Bound flip: entering runs to its opposite bound.
      kern::ops().axpy(-dir * t_best, w.data(), xb_.data(), static_cast<std::size_t>(m_));
      stat_[static_cast<std::size_t>(enter)] = dir > 0 ? VStat::AtUpper : VStat::AtLower;
      continue;
    }

    if (std::fabs(leave_piv) < kPivotTol) {
      if (!refactor()) return LpStatus::NumericalBreakdown;
      recompute_basics();
      continue;
    }

    // Pivot: update values, statuses and the product-form inverse.
    const double enter_val =
        (stat_[static_cast<std::size_t>(enter)] == VStat::Free ? 0.0 : value_of(enter)) +
        dir * t_best;
    kern::ops().axpy(-dir * t_best, w.data(), xb_.data(), static_cast<std::size_t>(m_));
    const int leaving = basic_[static_cast<std::size_t>(leave_pos)];
    stat_[static_cast<std::size_t>(leaving)] = leave_to_lower ? VStat::AtLower : VStat::AtUpper;
    basic_[static_cast<std::size_t>(leave_pos)] = enter;
    stat_[static_cast<std::size_t>(enter)] = VStat::Basic;
    xb_[static_cast<std::size_t>(leave_pos)] = enter_val;

    const std::size_t m = static_cast<std::size_t>(m_);
    const double inv_piv = 1.0 / leave_piv;
    for (std::size_t k = 0; k < m; ++k) {
      double* col = binv_.data() + k * m;
      const double v = col[static_cast<std::size_t>(leave_pos)];
      if (v == 0.0) continue;
      const double t = v * inv_piv;
      kern::ops().axpy(-t, w.data(), col, m);
      col[static_cast<std::size_t>(leave_pos)] = t;
    }
    ++pivots_since_refactor_;
    (void)phase1;
  }
}

LpStatus Tableau::run() {
  LpStatus st = make_feasible();
  if (st != LpStatus::Optimal) return st;
  st = optimize(false);
  if (st != LpStatus::Optimal) return st;
  // Final clean factorization; re-enter optimization if feasibility drifted.
  if (!refactor()) return LpStatus::NumericalBreakdown;
  recompute_basics();
  for (int i = 0; i < m_; ++i) {
    const int j = basic_[static_cast<std::size_t>(i)];
    const double v = xb_[static_cast<std::size_t>(i)];
    if (v < vlo_[static_cast<std::size_t>(j)] - opts_.feas_tol * 100 ||
        v > vhi_[static_cast<std::size_t>(j)] + opts_.feas_tol * 100) {
      const LpStatus st2 = make_feasible();
      if (st2 != LpStatus::Optimal) return st2;
      return optimize(false);
    }
  }
  return LpStatus::Optimal;
}

double lazy_violation(const Row& row, std::span<const double> x) {
  double lhs = 0.0;
  for (const RowEntry& e : row.terms) lhs += e.coeff * x[static_cast<std::size_t>(e.column)];
  switch (row.sense) {
    case RowSense::LessEqual: return lhs - row.rhs;
    case RowSense::GreaterEqual: return row.rhs - lhs;
    case RowSense::Equal: return std::fabs(lhs - row.rhs);
  }
  return 0.0;
}

double ray_rate(const Row& row, std::span<const double> ray) {
  double r = 0.0;
  for (const RowEntry& e : row.terms) r += e.coeff * ray[static_cast<std::size_t>(e.column)];
  switch (row.sense) {
    case RowSense::LessEqual: return r;
    case RowSense::GreaterEqual: return -r;
    case RowSense::Equal: return std::fabs(r);
  }
  return 0.0;
}

}  // namespace

LpResult solve_lp(const MilpModel& model, std::span<const double> lo,
                  std::span<const double> hi, const LpOptions& opts) {
  LpResult result;
  std::vector<int> active;
  std::vector<int> pool;
  for (int r = 0; r < model.num_rows(); ++r) {
    if (opts.honor_lazy && model.rows()[static_cast<std::size_t>(r)].lazy)
      pool.push_back(r);
    else
      active.push_back(r);
  }

  const int max_rounds = static_cast<int>(pool.size()) + 2;
  std::vector<char> in_pool(pool.size(), 1);
  for (int round = 0; round < max_rounds; ++round) {
    Tableau tab(model, lo, hi, active, opts);
    const LpStatus st = tab.run();
    result.iterations += tab.iterations();
    result.lazy_rounds = round + 1;
    if (st == LpStatus::Infeasible || st == LpStatus::IterationLimit ||
        st == LpStatus::NumericalBreakdown) {
      result.status = st;
      return result;
    }
    if (st == LpStatus::Unbounded) {
      // Try to block the improving ray with pooled rows.
      bool added = false;
      for (std::size_t k = 0; k < pool.size(); ++k) {
        if (!in_pool[k]) continue;
        const Row& row = model.rows()[static_cast<std::size_t>(pool[k])];
        if (ray_rate(row, tab.ray()) > 1e-9) {
          active.push_back(pool[k]);
          in_pool[k] = 0;
          added = true;
        }
      }
      if (!added) {
        result.status = LpStatus::Unbounded;
        return result;
      }
      continue;
    }
    // Optimal for the active subset; enforce the pool.
    std::vector<double> x = tab.solution();
    bool added = false;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (!in_pool[k]) continue;
      const Row& row = model.rows()[static_cast<std::size_t>(pool[k])];
      const double viol = lazy_violation(row, x);
      if (viol > opts.feas_tol * (1.0 + std::fabs(row.rhs))) {
        active.push_back(pool[k]);
        in_pool[k] = 0;
        added = true;
      }
    }
    if (!added) {
      result.status = LpStatus::Optimal;
      result.x = std::move(x);
      result.objective = model.objective_value(result.x);
      return result;
    }
  }
  result.status = LpStatus::NumericalBreakdown;
  return result;
}

LpResult solve_lp(const MilpModel& model, const LpOptions& opts) {
  return solve_lp(model, {}, {}, opts);
}

}  // namespace backhaul::milp
