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

#include "backhaul/milp/model.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace backhaul::milp {

std::string VarTag::to_string() const {
  std::string out = family;
  if (i >= 0) out += "_" + std::to_string(i);
  if (j >= 0) out += "_" + std::to_string(j);
  if (m >= 0) out += "_c" + std::to_string(m);
  return out;
}

int MilpModel::add_var(VarTag tag, VarKind kind, double lo, double hi, int branch_priority) {
  if (!(lo <= hi)) throw std::invalid_argument("add_var: lo > hi for " + tag.to_string());
  if (kind == VarKind::Binary && (lo < 0.0 || hi > 1.0))
    throw std::invalid_argument("add_var: binary bounds outside [0,1]");
  VarRef v;
  v.column = static_cast<int>(vars_.size());
  v.tag = std::move(tag);
  v.kind = kind;
  v.lo = lo;
  v.hi = hi;
  v.branch_priority = branch_priority;
  vars_.push_back(std::move(v));
  objective_.push_back(0.0);
  return vars_.back().column;
}

void MilpModel::add_row(Row row) {
  for (const RowEntry& e : row.terms) {
    if (e.column < 0 || e.column >= num_vars())
      throw std::invalid_argument("add_row: undeclared column in " + row.name);
    if (!std::isfinite(e.coeff))
      throw std::invalid_argument("add_row: non-finite coefficient in " + row.name);
  }
  if (!std::isfinite(row.rhs))
    throw std::invalid_argument("add_row: non-finite rhs in " + row.name);
  rows_.push_back(std::move(row));
}

void MilpModel::set_objective(int column, double coeff) {
  objective_.at(static_cast<std::size_t>(column)) = coeff;
}

double MilpModel::objective_value(std::span<const double> x) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < objective_.size(); ++j) acc += objective_[j] * x[j];
  return acc;
}

MilpModel MilpModel::with_fixed_binaries(
    std::span<const std::pair<int, double>> fixed) const {
  MilpModel copy = *this;
  for (const auto& [col, value] : fixed) {
    VarRef& v = copy.var(col);
    if (v.kind != VarKind::Binary)
      throw std::invalid_argument("with_fixed_binaries: " + v.tag.to_string() + " not binary");
    if (value < v.lo - 1e-9 || value > v.hi + 1e-9)
      throw std::invalid_argument("with_fixed_binaries: value outside bounds for " +
                                  v.tag.to_string());
    v.lo = value;
    v.hi = value;
  }
  return copy;
}

void MilpModel::dump_lp(std::ostream& os) const {
  os << "\\ backhaul-planner model dump\n";
  os << "Minimize\n obj:";
  bool first = true;
  for (int j = 0; j < num_vars(); ++j) {
    const double c = objective_[static_cast<std::size_t>(j)];
    if (c == 0.0) continue;
    os << (c < 0 ? " - " : (first ? " " : " + ")) << std::abs(c) << " "
       << vars_[static_cast<std::size_t>(j)].tag.to_string();
    first = false;
  }
  if (first) os << " 0 " << (num_vars() > 0 ? vars_[0].tag.to_string() : "x");
  os << "\nSubject To\n";
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const Row& row = rows_[r];
    os << " " << (row.name.empty() ? "r" + std::to_string(r) : row.name) << ":";
    bool rf = true;
    for (const RowEntry& e : row.terms) {
      os << (e.coeff < 0 ? " - " : (rf ? " " : " + ")) << std::abs(e.coeff) << " "
         << vars_[static_cast<std::size_t>(e.column)].tag.to_string();
      rf = false;
    }
    const char* sense = row.sense == RowSense::LessEqual   ? "<="
                        : row.sense == RowSense::Equal     ? "="
                                                           : ">=";
    os << " " << sense << " " << row.rhs << "\n";
  }
  os << "Bounds\n";
  for (const VarRef& v : vars_) {
    os << " " << v.lo << " <= " << v.tag.to_string();
    if (std::isfinite(v.hi)) os << " <= " << v.hi;
    os << "\n";
  }
  bool any_bin = false;
  for (const VarRef& v : vars_) {
    if (v.kind == VarKind::Binary) {
      if (!any_bin) os << "Binaries\n";
      any_bin = true;
      os << " " << v.tag.to_string() << "\n";
    }
  }
  os << "End\n";
}

}  // namespace backhaul::milp
