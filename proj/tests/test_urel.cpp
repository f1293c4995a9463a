// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "common/error.hpp"
#include "rewrite_oracle.hpp"
#include "test_support.hpp"
#include "urel/csv.hpp"
#include "urel/urel.hpp"
#include "urel/value.hpp"

using namespace hypc;
using namespace hypc::test;

namespace {

Relation h0() { return relation_from_csv("H0", read_file(fixture_path("lotka_volterra/H0.csv"))); }

URelation explanation(WorldTable& w) { return u_project(repair_key(h0(), {"phi"}, "Conf", w), {"phi", "upsilon"}); }

Relation table(std::vector<std::string> cols, std::vector<std::vector<std::string>> rows) {
  return Relation{"T", std::move(cols), {}, std::move(rows)};
}

// Exogenous factor for one column of a trial table: counts per value, then
// repair-key on phi. Built by hand here so the test does not lean on synth4u.
URelation factor(const Relation& trials, const std::string& column, WorldTable& w) {
  std::vector<std::string> order;
  std::map<std::string, int> count;
  std::size_t c = trials.col(column);
  for (auto& r : trials.rows) {
    if (!count.count(r[c])) order.push_back(r[c]);
    ++count[r[c]];
  }
  Relation g{"G", {"phi", column, "n"}, {}, {}};
  for (auto& v : order) g.rows.push_back({"1", v, std::to_string(count[v])});
  return u_project(repair_key(g, {"phi"}, "n", w), {"phi", column});
}

}  // namespace

TEST_CASE("value canonicalization") {
  CHECK(same_value(".5", "0.50"));
  CHECK(same_value("5e-1", "0.5"));
  CHECK(same_value("30", "3e1"));
  CHECK(same_value("-0", "0.000"));
  CHECK_FALSE(same_value("0.02", "0.020001"));
  CHECK_FALSE(same_value("abc", "ABC"));
  CHECK(canonical_value("x0") == "x0");
  CHECK(numeric_value(".397") == doctest::Approx(0.397));
  CHECK_FALSE(numeric_value("1.2.3"));
  CHECK_FALSE(numeric_value(""));
  CHECK(compare_values("10", "9") > 0);
  CHECK(compare_values("9", "a") < 0);
  CHECK(format_double(0.4) == "0.4");
}

TEST_CASE("CSV reading and writing") {
  auto t = parse_csv("a,b\r\n1,\"x,y\"\n\"q\"\"\",2\n");
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == "x,y");
  CHECK(t.rows[1][0] == "q\"");
  CHECK(parse_csv(write_csv(t)).rows == t.rows);
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), Error);
  CHECK_THROWS_AS(parse_csv(""), Error);
  CHECK_THROWS_AS(parse_csv("a\n\"open\n"), Error);
  CHECK(parse_csv("a,b\n").rows.empty());
}

TEST_CASE("repair-key examples") {
  WorldTable w;
  auto y = repair_key(h0(), {"phi"}, "Conf", w);
  REQUIRE(w.size() == 1);
  auto& m = w.var(0).marginals;
  REQUIRE(m.size() == 3);
  CHECK(std::abs(m[0] - 0.4) < 1e-12);
  CHECK(std::abs(m[1] - 0.4) < 1e-12);
  CHECK(std::abs(m[2] - 0.2) < 1e-12);
  CHECK(y.cols == std::vector<std::string>{"phi", "upsilon"});
  CHECK(y.k == 1);
  for (std::size_t i = 0; i < 3; ++i) CHECK(y.rows[i].cond == Condition{{0, static_cast<ValueId>(i + 1)}});

  WorldTable w1;
  repair_key(table({"k", "v", "wt"}, {{"a", "1", "7"}}), {"k"}, "wt", w1);
  CHECK(w1.var(0).marginals == std::vector<double>{1.0});

  WorldTable w2;
  repair_key(table({"k", "v", "wt"}, {{"a", "1", "1"}, {"a", "2", "3"}, {"b", "1", "2"}}), {"k"}, "wt", w2);
  REQUIRE(w2.size() == 2);
  CHECK(w2.var(0).marginals[0] == doctest::Approx(0.25));
  CHECK(w2.var(0).marginals[1] == doctest::Approx(0.75));

  WorldTable w3;
  CHECK_THROWS_AS(repair_key(table({"k", "wt"}, {{"a", "0"}}), {"k"}, "wt", w3), Error);
  CHECK_THROWS_AS(repair_key(table({"k", "wt"}, {{"a", "-1"}}), {"k"}, "wt", w3), Error);
  CHECK_THROWS_AS(repair_key(table({"k", "wt"}, {{"a", "lots"}}), {"k"}, "wt", w3), Error);
  try {
    repair_key(table({"k", "v", "wt"}, {{"a", "1", "1"}, {"a", "1.0", "2"}}), {"k"}, "wt", w3);
    FAIL("duplicate rows accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Integrity);
  }
}

TEST_CASE("selection, projection and join examples") {
  WorldTable w;
  auto y0 = explanation(w);
  auto only3 = u_select(y0, Predicate::compare(Predicate::Op::Eq, "upsilon", "3"));
  REQUIRE(only3.rows.size() == 1);
  CHECK(only3.rows[0].cond == Condition{{0, 3}});
  CHECK(u_select(y0, Predicate::always()).rows.size() == 3);
  try {
    u_select(y0, Predicate::compare(Predicate::Op::Eq, "D1", "1"));
    FAIL("condition column accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
  CHECK_THROWS_AS(u_select(y0, Predicate::compare(Predicate::Op::Eq, "nope", "1")), Error);

  auto same = u_project(y0, {"phi", "upsilon"});
  CHECK(urelation_to_csv(same) == urelation_to_csv(y0));
  CHECK_THROWS_AS(u_project(y0, {"Conf"}), Error);
  auto dup = u_project(y0, {"phi"});
  CHECK(dup.rows.size() == 3);

  auto h31 = relation_from_csv("H3_1", read_file(fixture_path("lotka_volterra/H3_1.csv")));
  auto a1 = factor(h31, "x0", w);
  auto a2 = factor(h31, "b", w);
  auto a3 = factor(h31, "p", w);
  CHECK(a1.rows.size() == 3);
  CHECK(a2.rows.size() == 5);
  CHECK(a3.rows.size() == 3);
  auto j = u_join(u_join(a1, a2, {"phi"}), a3, {"phi"});
  CHECK(j.rows.size() == 45);
  CHECK(j.k == 3);
  CHECK(u_join(a1, a2, {"phi"}).rows.size() == 15);

  auto classical = URelation::classical(table({"phi", "label"}, {{"1", "prey"}}));
  auto jc = u_join(a1, classical, {"phi"});
  CHECK(jc.k == 1);
  CHECK(jc.rows.size() == 3);

  // x1 -> 1 against x1 -> 2 never meet; shared x1 -> 1 appears once.
  URelation r{"R", 1, {"a"}, {{{{1, 1}}, {"u"}}, {{{1, 2}}, {"v"}}}};
  URelation s{"S", 2, {"a", "b"}, {{{{1, 1}, {2, 1}}, {"u", "p"}}, {{{1, 1}}, {"v", "q"}}}};
  auto rs = u_join(r, s, {"a"});
  REQUIRE(rs.rows.size() == 1);
  CHECK(rs.rows[0].cond == Condition{{1, 1}, {2, 1}});
  CHECK(rs.k == 2);
  CHECK_THROWS_AS(u_join(r, s, {"b"}), Error);
}

TEST_CASE("possible worlds and confidence examples") {
  WorldTable w;
  auto y0 = explanation(w);
  auto worlds = enumerate_worlds(w);
  REQUIRE(worlds.size() == 3);
  CHECK(worlds[0].pr == doctest::Approx(0.4));
  CHECK(worlds[1].pr == doctest::Approx(0.4));
  CHECK(worlds[2].pr == doctest::Approx(0.2));
  CHECK(decode(y0, worlds[2].theta).rows == std::vector<std::vector<std::string>>{{"1", "3"}});

  WorldTable none;
  auto one = enumerate_worlds(none);
  REQUIRE(one.size() == 1);
  CHECK(one[0].pr == 1.0);

  WorldTable two;
  two.add({0.3, 0.7});
  two.add({0.6, 0.4});
  auto four = enumerate_worlds(two);
  REQUIRE(four.size() == 4);
  CHECK(four[1].pr == doctest::Approx(0.3 * 0.4));
  CHECK(four[2].pr == doctest::Approx(0.7 * 0.6));
  CHECK_THROWS_AS(enumerate_worlds(two, 3), Error);

  CHECK(conf(y0, w, {"1", "3"}) == doctest::Approx(0.2));
  CHECK(conf(u_project(y0, {"phi"}), w, {"1"}) == doctest::Approx(1.0));
  CHECK(conf(y0, w, {"2", "1"}) == 0.0);
  CHECK(world_probability(w, {{0, 3}}) == doctest::Approx(0.2));
}

TEST_CASE("CSV forms round trip") {
  WorldTable w;
  auto y0 = explanation(w);
  auto text = urelation_to_csv(y0);
  CHECK(text.rfind("V1,D1,phi,upsilon\nx0,1,1,1\n", 0) == 0);
  CHECK(urelation_to_csv(urelation_from_csv("Y0", text)) == text);
  auto wt = world_table_to_csv(w);
  CHECK(wt == "V,D,Pr\nx0,1,0.4\nx0,2,0.4\nx0,3,0.2\n");
  CHECK(world_table_to_csv(world_table_from_csv(wt)) == wt);
  CHECK_THROWS_AS(world_table_from_csv("V,D,Pr\nx0,1,0.5\n"), Error);
  CHECK_THROWS_AS(world_table_from_csv("V,D,Pr\nx1,1,1\n"), Error);
  CHECK(urelation_from_csv("Y", "V1,D1,a\nx0,1,q\n,,r\n").rows[1].cond.empty());
  CHECK_THROWS_AS(urelation_from_csv("Y", "V1,D1,a\nx0,zero,q\n"), Error);
  CHECK_THROWS_AS(urelation_from_csv("Y", "V1,D1,V2,D2,a\nx0,1,x0,2,q\n"), Error);
  CHECK_THROWS_AS(relation_from_csv("R", "a,a\n1,2\n"), Error);

  Relation keyed{"R", {"k", "tid", "v"}, {"k", "tid"}, {{"1", "1", "a"}, {"1", "2", "a"}}};
  CHECK_NOTHROW(keyed.check_key());
  keyed.rows.push_back({"1.0", "1", "b"});
  CHECK_THROWS_AS(keyed.check_key(), Error);
}

// ---- rewriting equivalence against a classical evaluator -------------------

TEST_CASE("property: rewritten queries decode to per-world answers") {
  auto rng = rng_for(41);
  auto tally = rewriting_equivalence(rng, 100, false);
  CHECK(tally.failures == 0);
  CHECK(tally.answered > 100);
  CHECK(tally.mass_error < 1e-9);
}

TEST_CASE("property: join width, degradation and confidence") {
  auto rng = rng_for(43);
  for (int iter = 0; iter < 200; ++iter) {
    auto db = random_udb(rng);
    const auto& r = db.rels[0];
    const auto& s = db.rels[1];
    std::vector<std::string> on;
    for (auto& c : r.cols)
      if (s.has(c)) on.push_back(c);
    bool clash = false;
    for (auto& c : s.cols)
      if (r.has(c) && std::find(on.begin(), on.end(), c) == on.end()) clash = true;
    if (clash) continue;
    auto j = u_join(r, s, on);
    CHECK(j.k <= r.k + s.k);
    for (auto& row : j.rows) {
      std::set<VarId> vars;
      for (auto& a : row.cond) CHECK(vars.insert(a.var).second);
    }

    // With every condition stripped the operators are classical algebra.
    URelation rc = r, sc = s;
    for (auto& row : rc.rows) row.cond.clear();
    for (auto& row : sc.rows) row.cond.clear();
    rc.k = sc.k = 0;
    auto jc = u_join(rc, sc, on);
    CHECK(jc.k == 0);
    AlgebraQuery jq;
    jq.kind = AlgebraQuery::Join;
    AlgebraQuery a, b;
    a.base = 0;
    b.base = 1;
    jq.kids = {a, b};
    UDb flat{db.w, {rc, sc}};
    CHECK(classic_world(jc, {}).rows == classic_evaluate(jq, flat, {}).rows);

    // Confidence equals the mass of worlds that contain the tuple.
    if (!r.rows.empty()) {
      auto tuple = r.rows[rng() % r.rows.size()].values;
      std::vector<int> t;
      for (auto& v : tuple) t.push_back(std::stoi(v));
      double expect = 0;
      for (auto& world : enumerate_worlds(db.w, 64))
        if (classic_world(r, world.theta).rows.count(t)) expect += world.pr;
      CHECK(conf(r, db.w, tuple) == doctest::Approx(expect).epsilon(1e-9));
    }
  }
}
