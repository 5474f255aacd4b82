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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace backhaul::milp {

enum class VarKind { Continuous, Binary };

// Structured variable tag: family plus up to three indices (node i, node j,
// channel m). Rendered names are unique within a model.
struct VarTag {
  std::string family;
  int i = -1;
  int j = -1;
  int m = -1;
  std::string to_string() const;
};

struct VarRef {
  int column = -1;
  VarTag tag;
  VarKind kind = VarKind::Continuous;
  double lo = 0.0;
  double hi = 0.0;
  int branch_priority = 0;  // higher branches earlier
};

enum class RowSense { LessEqual, Equal, GreaterEqual };

struct RowEntry {
  int column = -1;
  double coeff = 0.0;
};

struct Row {
  std::vector<RowEntry> terms;
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
  std::string name;
  // Lazy rows are kept in a pool and only activated by the LP solver once
  // violated; the solution it returns satisfies them all.
  bool lazy = false;
};

class MilpModel {
 public:
  int add_var(VarTag tag, VarKind kind, double lo, double hi, int branch_priority = 0);
  void add_row(Row row);
  void set_objective(int column, double coeff);  // minimize

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const std::vector<VarRef>& vars() const { return vars_; }
  const VarRef& var(int column) const { return vars_.at(static_cast<std::size_t>(column)); }
  VarRef& var(int column) { return vars_.at(static_cast<std::size_t>(column)); }
  const std::vector<Row>& rows() const { return rows_; }
  const std::vector<double>& objective() const { return objective_; }

  double objective_value(std::span<const double> x) const;

  // Copy with the given binaries pinned to fixed values. Throws
  // std::invalid_argument when a target is not binary or the value lies
  // outside its current bounds.
  MilpModel with_fixed_binaries(std::span<const std::pair<int, double>> fixed) const;

  // Plain-text LP-format dump (objective, constraints, bounds, binaries) for
  // cross-checking against external solvers.
  void dump_lp(std::ostream& os) const;

 private:
  std::vector<VarRef> vars_;
  std::vector<Row> rows_;
  std::vector<double> objective_;
};

}  // namespace backhaul::milp
