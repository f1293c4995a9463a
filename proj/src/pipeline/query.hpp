// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "urel/urel.hpp"

namespace hypc {

// Parenthesized algebra over named U-relations:
//   NAME
//   (select PRED Q)      PRED: (= col val) (!= ..) (< ..) (<= ..) (> ..) (>= ..)
//                              (and P..) (or P..) (not P) true
//   (project (col ..) Q)
//   (join Q Q)           natural join on the shared columns
// Atoms are bare words or double-quoted strings with \" and \\ escapes.
struct Query {
  enum class Kind { Relation, Select, Project, Join };
  Kind kind = Kind::Relation;
  std::string name;                  // Relation
  Predicate pred;                    // Select
  std::vector<std::string> columns;  // Project
  std::vector<std::shared_ptr<const Query>> args;

  std::string to_string() const;
};

// Parse error with the offending position on malformed text.
Query parse_query(std::string_view text);

using Database = std::map<std::string, URelation>;

// Rewritten evaluation. Domain error for unknown relations or columns.
URelation evaluate(const Query& q, const Database& db);

}  // namespace hypc
