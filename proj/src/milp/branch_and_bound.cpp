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

#include "backhaul/milp/branch_and_bound.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace backhaul::milp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGapEps = 1e-12;

struct Node {
  double bound = -kInf;
  long seq = 0;
  std::vector<double> lo, hi;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.seq > b.seq;
  }
};

double fractionality(double v) {
  const double f = v - std::floor(v);
  return std::min(f, 1.0 - f);
}

}  // namespace

MilpModel warm_fix(const MilpModel& model,
                   std::span<const std::pair<int, double>> fixed) {
  return model.with_fixed_binaries(fixed);
}

BnbResult branch_and_bound(const MilpModel& model, const BnbOptions& opts,
                           const std::optional<WarmStart>& warm) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed_s = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  BnbResult result;
  const int n = model.num_vars();

  double ub = kInf;
  std::optional<std::vector<double>> incumbent;
  if (warm.has_value()) {
    ub = warm->objective;
    incumbent = warm->x;
  }

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  {
    Node root;
    root.lo.resize(static_cast<std::size_t>(n));
    root.hi.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      root.lo[static_cast<std::size_t>(j)] = model.var(j).lo;
      root.hi[static_cast<std::size_t>(j)] = model.var(j).hi;
    }
    root.bound = -kInf;
    open.push(std::move(root));
  }

  auto cutoff = [&](double bound) {
    if (!std::isfinite(ub)) return false;
    const double slack = std::max(opts.gap_target * std::fabs(ub), 1e-9 * std::max(1.0, std::fabs(ub)));
    return bound >= ub - slack;
  };

  long seq = 0;
  bool timed_out = false;
  bool stopped_by_cutoff = false;
  double cutoff_bound = -kInf;

  while (!open.empty()) {
    if (result.nodes_explored >= opts.max_nodes || elapsed_s() > opts.time_limit_s) {
      timed_out = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (cutoff(node.bound)) {
      // Best-first: every remaining node is at least as bad.
      stopped_by_cutoff = true;
      cutoff_bound = node.bound;
      break;
    }

    LpResult lp = solve_lp(model, node.lo, node.hi, opts.lp);
    ++result.nodes_explored;
    if (lp.status == LpStatus::Infeasible) continue;
    if (lp.status != LpStatus::Optimal)
      throw std::runtime_error("branch_and_bound: LP relaxation failed");
    if (cutoff(lp.objective)) continue;

    // Branch selection: priority class, then most fractional, then column.
    int branch_col = -1;
    int best_prio = std::numeric_limits<int>::min();
    double best_frac = -1.0;
    for (int j = 0; j < n; ++j) {
      const VarRef& v = model.var(j);
      if (v.kind != VarKind::Binary) continue;
      if (node.lo[static_cast<std::size_t>(j)] == node.hi[static_cast<std::size_t>(j)]) continue;
      const double frac = fractionality(lp.x[static_cast<std::size_t>(j)]);
      if (frac <= opts.int_tol) continue;
      if (v.branch_priority > best_prio ||
          (v.branch_priority == best_prio && frac > best_frac + 1e-12)) {
        best_prio = v.branch_priority;
        best_frac = frac;
        branch_col = j;
      }
    }

    if (branch_col < 0) {
      // Integral: candidate incumbent.
      if (lp.objective < ub - kGapEps) {
        ub = lp.objective;
        incumbent = lp.x;
        // Snap near-integral binaries.
        for (int j = 0; j < n; ++j)
          if (model.var(j).kind == VarKind::Binary)
            (*incumbent)[static_cast<std::size_t>(j)] =
                std::round((*incumbent)[static_cast<std::size_t>(j)]);
        if (opts.collect_trace) result.trace.incumbent_objectives.push_back(ub);
      }
      continue;
    }

    if (opts.collect_trace) result.trace.branch_columns.push_back(branch_col);
    Node down = node;
    down.hi[static_cast<std::size_t>(branch_col)] = 0.0;
    down.lo[static_cast<std::size_t>(branch_col)] = 0.0;
    down.bound = lp.objective;
    down.seq = ++seq;
    Node up = std::move(node);
    up.lo[static_cast<std::size_t>(branch_col)] = 1.0;
    up.hi[static_cast<std::size_t>(branch_col)] = 1.0;
    up.bound = lp.objective;
    up.seq = ++seq;
    open.push(std::move(down));
    open.push(std::move(up));
  }

  // Global lower bound. Best-first pops nodes in nondecreasing bound order,
  // so a cutoff stop certifies the popped bound; a timeout leaves the top of
  // the open queue as the bound; full exhaustion proves optimality.
  double lb;
  if (stopped_by_cutoff) {
    lb = cutoff_bound;
  } else if (timed_out) {
    lb = open.empty() ? (incumbent.has_value() ? ub : -kInf) : open.top().bound;
  } else {
    lb = incumbent.has_value() ? ub : -kInf;
  }
  if (incumbent.has_value()) lb = std::min(lb, ub);

  result.incumbent = incumbent;
  if (incumbent.has_value()) {
    result.objective = ub;
    result.lower_bound = std::isfinite(lb) ? lb : ub;
    const double raw_gap = std::max(0.0, ub - result.lower_bound);
    result.gap = raw_gap <= 1e-9 * std::max(1.0, std::fabs(ub))
                     ? 0.0
                     : raw_gap / std::max(std::fabs(ub), kGapEps);
    if (timed_out)
      result.status = BnbStatus::TimeLimit;
    else if (result.gap > 0.0)
      result.status = BnbStatus::GapReached;
    else
      result.status = BnbStatus::Optimal;
  } else {
    result.status = timed_out ? BnbStatus::TimeLimit : BnbStatus::Infeasible;
    result.lower_bound = std::isfinite(lb) ? lb : 0.0;
    result.gap = kInf;
  }
  return result;
}

}  // namespace backhaul::milp
