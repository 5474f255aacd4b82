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

#include "support/tableau_simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace backhaul::testsupport {
namespace {

constexpr double kEps = 1e-9;

// Standard-form data: min c'z s.t. A z = b, z >= 0, b >= 0.
struct Standard {
  int n = 0;
  int m = 0;
  std::vector<std::vector<double>> a;  // m rows, n cols
  std::vector<double> b;
  std::vector<double> c;
  std::vector<double> shift;  // x_j = z_j + shift_j for the first n0 columns
  int n0 = 0;
};

Standard to_standard(const milp::MilpModel& model) {
  Standard s;
  s.n0 = model.num_vars();
  for (int j = 0; j < s.n0; ++j) {
    const milp::VarRef& v = model.var(j);
    if (!std::isfinite(v.lo) || !std::isfinite(v.hi))
      throw std::invalid_argument("tableau oracle requires finite bounds");
    s.shift.push_back(v.lo);
  }

  // Rows: model rows plus one upper-bound row per variable with hi > lo.
  struct RawRow {
    std::vector<double> coeffs;
    milp::RowSense sense;
    double rhs;
  };
  std::vector<RawRow> raws;
  for (const milp::Row& row : model.rows()) {
    RawRow r;
    r.coeffs.assign(static_cast<std::size_t>(s.n0), 0.0);
    double shift_sum = 0.0;
    for (const milp::RowEntry& e : row.terms) {
      r.coeffs[static_cast<std::size_t>(e.column)] += e.coeff;
      shift_sum += e.coeff * s.shift[static_cast<std::size_t>(e.column)];
    }
    r.sense = row.sense;
    r.rhs = row.rhs - shift_sum;
    raws.push_back(std::move(r));
  }
  for (int j = 0; j < s.n0; ++j) {
    const milp::VarRef& v = model.var(j);
    const double range = v.hi - v.lo;
    RawRow r;
    r.coeffs.assign(static_cast<std::size_t>(s.n0), 0.0);
    r.coeffs[static_cast<std::size_t>(j)] = 1.0;
    r.sense = milp::RowSense::LessEqual;
    r.rhs = range;
    raws.push_back(std::move(r));
  }

  s.m = static_cast<int>(raws.size());
  int slacks = 0;
  for (const RawRow& r : raws)
    if (r.sense != milp::RowSense::Equal) ++slacks;
  s.n = s.n0 + slacks;
  s.c.assign(static_cast<std::size_t>(s.n), 0.0);
  for (int j = 0; j < s.n0; ++j) s.c[static_cast<std::size_t>(j)] = model.objective()[static_cast<std::size_t>(j)];

  int next_slack = s.n0;
  for (const RawRow& r : raws) {
    std::vector<double> row(static_cast<std::size_t>(s.n), 0.0);
    for (int j = 0; j < s.n0; ++j) row[static_cast<std::size_t>(j)] = r.coeffs[static_cast<std::size_t>(j)];
    double rhs = r.rhs;
    if (r.sense == milp::RowSense::LessEqual) row[static_cast<std::size_t>(next_slack++)] = 1.0;
    if (r.sense == milp::RowSense::GreaterEqual) row[static_cast<std::size_t>(next_slack++)] = -1.0;
    if (rhs < 0) {
      for (double& v : row) v = -v;
      rhs = -rhs;
    }
    s.a.push_back(std::move(row));
    s.b.push_back(rhs);
  }
  return s;
}

// Full-tableau phase with Bland's rule; returns false on unbounded.
bool pivot_until_optimal(std::vector<std::vector<double>>& tab, std::vector<int>& basis,
                         int ncols) {
  const int m = static_cast<int>(tab.size()) - 1;
  while (true) {
    int enter = -1;
    for (int j = 0; j < ncols; ++j) {
      if (tab[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] < -kEps) {
        enter = j;
        break;  // Bland: first improving column
      }
    }
    if (enter < 0) return true;
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      const double a = tab[static_cast<std::size_t>(i)][static_cast<std::size_t>(enter)];
      if (a > kEps) {
        const double ratio =
            tab[static_cast<std::size_t>(i)].back() / a;
        if (ratio < best_ratio - kEps ||
            (ratio < best_ratio + kEps &&
             (leave < 0 || basis[static_cast<std::size_t>(i)] <
                               basis[static_cast<std::size_t>(leave)]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) return false;
    // Pivot (leave, enter).
    auto& prow = tab[static_cast<std::size_t>(leave)];
    const double piv = prow[static_cast<std::size_t>(enter)];
    for (double& v : prow) v /= piv;
    for (std::size_t i = 0; i < tab.size(); ++i) {
      if (static_cast<int>(i) == leave) continue;
      const double f = tab[i][static_cast<std::size_t>(enter)];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < tab[i].size(); ++j) tab[i][j] -= f * prow[j];
    }
    basis[static_cast<std::size_t>(leave)] = enter;
  }
}

}  // namespace

TableauResult tableau_solve(const milp::MilpModel& model) {
  const Standard s = to_standard(model);
  const int m = s.m;
  const int n_all = s.n + m;  // with artificials

  // Tableau rows: m constraint rows + objective row; last column is rhs.
  std::vector<std::vector<double>> tab(
      static_cast<std::size_t>(m) + 1,
      std::vector<double>(static_cast<std::size_t>(n_all) + 1, 0.0));
  std::vector<int> basis(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < s.n; ++j)
      tab[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          s.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    tab[static_cast<std::size_t>(i)][static_cast<std::size_t>(s.n + i)] = 1.0;
    tab[static_cast<std::size_t>(i)].back() = s.b[static_cast<std::size_t>(i)];
    basis[static_cast<std::size_t>(i)] = s.n + i;
  }
  // Phase-1 objective: sum of artificials, expressed over the basis.
  for (int j = 0; j <= n_all; ++j) {
    double acc = 0.0;
    for (int i = 0; i < m; ++i) acc -= tab[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    tab[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] =
        (j >= s.n && j < n_all ? 1.0 : 0.0) + acc;
  }

  TableauResult result;
  if (!pivot_until_optimal(tab, basis, n_all)) {
    result.status = TableauResult::Status::Unbounded;  // cannot happen in phase 1
    return result;
  }
  if (tab[static_cast<std::size_t>(m)].back() < -1e-7) {
    result.status = TableauResult::Status::Infeasible;
    return result;
  }

  // Phase 2: original costs; artificial columns removed from pricing by
  // pinning their cost row entries to +1 (never attractive).
  for (int j = 0; j <= n_all; ++j) tab[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] = 0.0;
  for (int j = 0; j < s.n; ++j) tab[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] = s.c[static_cast<std::size_t>(j)];
  for (int i = 0; i < m; ++i) {
    const int bj = basis[static_cast<std::size_t>(i)];
    const double cb = bj < s.n ? s.c[static_cast<std::size_t>(bj)] : 0.0;
    if (cb == 0.0) continue;
    for (int j = 0; j <= n_all; ++j)
      tab[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] -=
          cb * tab[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  // Forbid artificial re-entry.
  for (int j = s.n; j < n_all; ++j)
    if (tab[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] < 0)
      tab[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] = 0.0;

  if (!pivot_until_optimal(tab, basis, s.n)) {
    result.status = TableauResult::Status::Unbounded;
    return result;
  }

  std::vector<double> z(static_cast<std::size_t>(s.n), 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[static_cast<std::size_t>(i)] < s.n)
      z[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] =
          tab[static_cast<std::size_t>(i)].back();
  result.status = TableauResult::Status::Optimal;
  result.x.resize(static_cast<std::size_t>(s.n0));
  result.objective = 0.0;
  for (int j = 0; j < s.n0; ++j) {
    result.x[static_cast<std::size_t>(j)] = z[static_cast<std::size_t>(j)] + s.shift[static_cast<std::size_t>(j)];
    result.objective += model.objective()[static_cast<std::size_t>(j)] * result.x[static_cast<std::size_t>(j)];
  }
  return result;
}

}  // namespace backhaul::testsupport
