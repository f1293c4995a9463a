// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace hypc {

using VarId = std::uint32_t;
using ValueId = std::uint32_t;  // 1-based alternative index

// Classical relation with an optional designated key. Cells are strings.
struct Relation {
  std::string name;
  std::vector<std::string> cols;
  std::vector<std::string> key;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& c) const;  // Domain error when absent
  bool has(const std::string& c) const;
  // Integrity error when two rows agree on the key (every column if no key).
  void check_key() const;
};

struct Assignment {
  VarId var;
  ValueId value;
  bool operator==(const Assignment&) const = default;
  auto operator<=>(const Assignment&) const = default;
};

// A conjunction of variable assignments, in column order.
using Condition = std::vector<Assignment>;

struct URow {
  Condition cond;
  std::vector<std::string> values;
};

// U-relation: condition column pairs V1 D1 .. Vk Dk followed by data columns.
// Rows may use fewer than k pairs; unused pairs are blank on export. With
// k = 0 it is a classical relation.
struct URelation {
  std::string name;
  std::size_t k = 0;
  std::vector<std::string> cols;
  std::vector<URow> rows;

  std::size_t col(const std::string& c) const;
  bool has(const std::string& c) const;
  static URelation classical(const Relation& r);
};

struct RandVar {
  VarId id;
  std::vector<double> marginals;  // marginals[d - 1] is Pr(var = d)
};

// Marginals of every random variable. Variable ids are allocated here, in
// increasing order, so one table serves a whole database.
class WorldTable {
 public:
  VarId add(std::vector<double> marginals);
  const std::vector<RandVar>& vars() const noexcept { return vars_; }
  const RandVar& var(VarId id) const;
  double pr(VarId id, ValueId d) const;
  std::size_t size() const noexcept { return vars_.size(); }
  // Checks positivity and per-variable normalization (tolerance 1e-9).
  void validate() const;

 private:
  std::vector<RandVar> vars_;
};

std::string var_name(VarId v);  // "x3"
VarId parse_var_name(const std::string& s);

// Selection predicate over data columns: comparisons of a column with a
// constant, combined with and/or/not. Comparison uses compare_values.
struct Predicate {
  enum class Op { True, Eq, Ne, Lt, Le, Gt, Ge, And, Or, Not };
  Op op = Op::True;
  std::string column;
  std::string value;
  std::vector<Predicate> args;

  static Predicate always() { return {}; }
  static Predicate compare(Op op, std::string column, std::string value);
  static Predicate combine(Op op, std::vector<Predicate> args);

  std::vector<std::string> columns() const;
  bool eval(const std::vector<std::string>& cols, const std::vector<std::string>& row) const;
};

// repair-key_{x@weight}: one fresh variable per distinct x-group, one
// alternative per row, marginal weight / group sum. The weight column is
// projected away. Domain error for non-positive or non-numeric weights,
// integrity error when two rows agree outside the weight column.
URelation repair_key(const Relation& r, const std::vector<std::string>& x, const std::string& weight, WorldTable& w);

// Rewritten operators. Selection and projection keep conditions; projection
// keeps duplicates. Join is natural on `on`, keeps row pairs whose conditions
// agree on shared variables, and merges their conditions.
URelation u_select(const URelation& r, const Predicate& pred);
URelation u_project(const URelation& r, const std::vector<std::string>& z);
URelation u_join(const URelation& r, const URelation& s, const std::vector<std::string>& on);

// Possible worlds. A world assigns a value to every variable of the table.
struct World {
  std::vector<ValueId> theta;  // theta[v] for each VarId v
  double pr = 1;
};

// Rows of r present in world theta, conditions dropped, duplicates removed,
// sorted by value order.
Relation decode(const URelation& r, const std::vector<ValueId>& theta);

// Calls f for every world in odometer order (last variable fastest).
// Capacity error when the world count exceeds cap.
void for_each_world(const WorldTable& w, std::size_t cap, const std::function<void(const World&)>& f);
std::vector<World> enumerate_worlds(const WorldTable& w, std::size_t cap = 1'000'000);
double world_probability(const WorldTable& w, const std::vector<Assignment>& theta);
bool satisfied(const Condition& c, const std::vector<ValueId>& theta);

// Confidence of a tuple over r's data columns: the probability mass of worlds
// whose decoding of r contains it. Only variables occurring in r are
// enumerated; capacity error past cap combinations.
double conf(const URelation& r, const WorldTable& w, const std::vector<std::string>& tuple,
            std::size_t cap = 1'000'000);

// CSV forms: classical relations with a header row, U-relations with
// V1,D1,..,Vk,Dk before the data columns, the world table as V,D,Pr.
Relation relation_from_csv(const std::string& name, const std::string& text);
std::string relation_to_csv(const Relation& r);
std::string urelation_to_csv(const URelation& r);
URelation urelation_from_csv(const std::string& name, const std::string& text);
std::string world_table_to_csv(const WorldTable& w);
WorldTable world_table_from_csv(const std::string& text);

}  // namespace hypc
