// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "urel/urel.hpp"

namespace hypc::test {

// Random U-database and positive algebra queries over it, with a classical
// per-world evaluator over integer tuples as the reference.

struct UDb {
  WorldTable w;
  std::vector<URelation> rels;
};

// Random U-database with at most 64 worlds over small integer values.
UDb random_udb(std::mt19937_64& rng);

struct AlgebraQuery {
  enum Kind { Base, Select, Project, Join } kind = Base;
  std::size_t base = 0;
  std::string column;
  int constant = 0;
  bool less = false;  // select column < constant instead of ==
  std::vector<std::string> keep;
  std::vector<AlgebraQuery> kids;
};

AlgebraQuery random_algebra_query(std::mt19937_64& rng, const UDb& db, int ops);

// The query in the parenthesized text form, relations named R0, R1, ...
std::string query_text(const AlgebraQuery& q, const UDb& db);

// Rewritten evaluation calling the U-relational operators directly.
URelation rewritten_direct(const AlgebraQuery& q, const UDb& db);

// Rewritten evaluation through the query parser and evaluator.
URelation rewritten_via_text(const AlgebraQuery& q, const UDb& db);

// Classical relation as column names plus a set of integer tuples.
struct ClassicRelation {
  std::vector<std::string> cols;
  std::set<std::vector<int>> rows;
};

ClassicRelation classic_world(const URelation& u, const std::vector<ValueId>& theta);
ClassicRelation classic_evaluate(const AlgebraQuery& q, const UDb& db, const std::vector<ValueId>& theta);

struct RewriteTally {
  int queries = 0;
  int worlds = 0;
  int failures = 0;   // worlds whose decoded answer differs from the classical one
  int answered = 0;   // worlds with a non-empty classical answer
  double mass_error = 0;  // largest |sum of world probabilities - 1|
};

// Runs n random 3-operator queries and compares every world.
RewriteTally rewriting_equivalence(std::mt19937_64& rng, int n, bool via_text);

}  // namespace hypc::test
