// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "common/error.hpp"
#include "fd/reasoning.hpp"
#include "folding/folding.hpp"
#include "sem/encode.hpp"
#include "synth4u/synth4u.hpp"
#include "test_support.hpp"
#include "urel/value.hpp"

using namespace hypc;
using namespace hypc::test;

namespace {

Relation fixture_relation(const std::string& name) {
  return relation_from_csv(name, read_file(fixture_path("lotka_volterra/" + name + ".csv")));
}

FDSet lv_sigma() { return h_encode(load_structure("lotka_volterra/structure.json")); }

FDSet fold_gamma(const FDSet& gamma) { return folding(left_reduce(gamma)).folded; }

std::vector<std::string> column(const URelation& r, const std::string& c) {
  std::vector<std::string> out;
  std::size_t i = r.col(c);
  for (auto& row : r.rows) out.push_back(row.values[i]);
  return out;
}

using Strings = std::vector<std::string>;

}  // namespace

TEST_CASE("explanation table examples") {
  WorldTable w;
  auto y0 = build_explanation(fixture_relation("H0"), w);
  CHECK(y0.name == "Y0");
  CHECK(y0.cols == Strings{"phi", "upsilon"});
  CHECK(w.var(0).marginals[0] == doctest::Approx(0.4));
  CHECK(w.var(0).marginals[2] == doctest::Approx(0.2));

  WorldTable w1;
  build_explanation(Relation{"H0", {"phi", "upsilon", "Conf"}, {}, {{"1", "1", "5"}, {"2", "1", "3"}}}, w1);
  REQUIRE(w1.size() == 2);
  CHECK(w1.var(0).marginals == std::vector<double>{1.0});
  CHECK(w1.var(1).marginals == std::vector<double>{1.0});

  WorldTable w2;
  build_explanation(Relation{"H0", {"phi", "upsilon", "Conf"}, {}, {{"1", "1", "1"}, {"1", "2", "1"}}}, w2);
  CHECK(w2.var(0).marginals == std::vector<double>{0.5, 0.5});
  CHECK_THROWS_AS(build_explanation(Relation{"H0", {"phi", "Conf"}, {}, {{"1", "1"}}}, w2), Error);
}

TEST_CASE("u-factor learning examples") {
  auto sigma = lv_sigma();
  auto learned = learn_u_factors(fixture_relation("H3_1"), sigma);
  const Catalog& cat = sigma.cat();
  REQUIRE(learned.groups.size() == 3);
  CHECK(learned.groups[0] == sigma.parse_attrs("x0 y0"));
  CHECK(learned.groups[1] == sigma.parse_attrs("b d"));
  CHECK(learned.groups[2] == sigma.parse_attrs("p r"));
  CHECK(cat.name(learned.pivots[0]) == "x0");
  CHECK(cat.name(learned.pivots[1]) == "b");
  CHECK(cat.name(learned.pivots[2]) == "p");
  CHECK(learned.gamma.same_as(load_fds("lv_pivots.fd")));
  CHECK(fold_gamma(learned.gamma).same_as(load_fds("lv_pivots_folded.fd")));

  auto one = learn_u_factors(Relation{"H", {"tid", "phi", "x0", "b"}, {}, {{"1", "1", "2", "7"}}}, sigma);
  REQUIRE(one.groups.size() == 1);
  CHECK(one.groups[0] == sigma.parse_attrs("x0 b"));

  // b repeats where x0 differs and vice versa: nothing determines anything.
  auto loose = learn_u_factors(
      Relation{"H", {"tid", "phi", "x0", "b"}, {}, {{"1", "1", "1", "1"}, {"2", "1", "1", "2"}, {"3", "1", "2", "1"}}}, sigma);
  CHECK(loose.groups.size() == 2);
  for (auto& fd : loose.gamma) CHECK(fd.lhs.contains(Catalog::kUpsilon));

  // Rounding merges near-equal readings when asked to.
  Relation noisy{"H", {"tid", "phi", "x0", "b"}, {}, {{"1", "1", "1", "5"}, {"2", "1", "1.0004", "5"}, {"3", "1", "2", "6"}}};
  CHECK(learn_u_factors(noisy, sigma).groups.size() == 2);
  CHECK(learn_u_factors(noisy, sigma, LearnOptions{0.01}).groups.size() == 1);

  try {
    learn_u_factors(Relation{"H", {"tid", "phi", "x0"}, {}, {}}, sigma);
    FAIL("empty relation accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
  CHECK_THROWS_AS(learn_u_factors(Relation{"H", {"tid", "phi", "zz"}, {}, {{"1", "1", "1"}}}, sigma), Error);
}

TEST_CASE("u-factorization examples") {
  auto h31 = fixture_relation("H3_1");
  WorldTable w;
  auto y1 = u_factor(h31, "x0", w);
  CHECK(y1.cols == Strings{"phi", "x0"});
  CHECK(column(y1, "x0") == Strings{"3", "10", "30"});
  auto& m = w.var(0).marginals;
  CHECK(m[0] == doctest::Approx(1.0 / 6));
  CHECK(m[1] == doctest::Approx(1.0 / 6));
  CHECK(m[2] == doctest::Approx(4.0 / 6));
  auto y2 = u_factor(h31, "b", w);
  CHECK(column(y2, "b") == Strings{"1", "1.5", ".5", ".4", ".397"});
  CHECK(w.var(1).marginals[3] == doctest::Approx(2.0 / 6));

  WorldTable w1;
  u_factor(Relation{"H", {"tid", "phi", "x0"}, {}, {{"1", "1", "4"}}}, "x0", w1);
  CHECK(w1.var(0).marginals == std::vector<double>{1.0});
}

TEST_CASE("Lotka-Volterra synthesis for uncertainty") {
  auto sigma = lv_sigma();
  auto h31 = fixture_relation("H3_1");
  auto h32 = fixture_relation("H3_2");
  auto gf = fold_gamma(learn_u_factors(h31, sigma).gamma);
  WorldTable w;
  auto y0 = build_explanation(fixture_relation("H0"), w);
  auto r = synthesize4u(gf, Hypothesis{"3", {h31}, {h32}}, y0, w);
  REQUIRE(r.relations.size() == 4);
  const auto& y = r.relations;
  CHECK(y[0].name == "Y3_1");
  CHECK(y[3].name == "Y3_4");
  CHECK(column(y[0], "x0") == Strings{"3", "10", "30"});
  CHECK(column(y[1], "b") == Strings{"1", "1.5", ".5", ".4", ".397"});
  CHECK(column(y[2], "p") == Strings{"1", ".02", ".018"});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t a = 0; a < y[i].rows.size(); ++a)
      CHECK(y[i].rows[a].cond == Condition{{static_cast<VarId>(i + 1), static_cast<ValueId>(a + 1)}});

  const URelation& y4 = y[3];
  CHECK(y4.cols == Strings{"phi", "upsilon", "t", "x", "y"});
  CHECK(y4.k == 4);
  REQUIRE(y4.rows.size() == 30);
  CHECK(y4.rows[0].cond == Condition{{0, 3}, {1, 1}, {2, 1}, {3, 1}});
  CHECK(y4.rows[0].values == Strings{"1", "3", "0", "3", "6"});
  const Condition theta{{0, 3}, {1, 3}, {2, 5}, {3, 3}};
  const std::vector<Strings> tid6 = {
      {"1", "3", "0", "30", "4"},      {"1", "3", "5", "50.1", "62.9"}, {"1", "3", "10", "13.8", "8.65"},
      {"1", "3", "15", "79.3", "8.23"}, {"1", "3", "20", "12.6", "30.7"}};
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(y4.rows[25 + i].cond == theta);
    CHECK(y4.rows[25 + i].values == tid6[i]);
  }

  double pr = world_probability(w, theta);
  CHECK(pr == doctest::Approx(0.2 * (4.0 / 6) * (1.0 / 6) * (2.0 / 6)).epsilon(1e-12));
  double by_worlds = 0;
  for_each_world(w, 1000, [&](const World& x) {
    if (satisfied(theta, x.theta)) by_worlds += x.pr;
  });
  CHECK(std::abs(by_worlds - pr) < 1e-9);
  CHECK(std::abs(conf(y4, w, tid6[1]) - pr) < 1e-9);

  // Only the explanation variable when no empirical pivot feeds the prediction.
  auto no_pivots = fds("#@attrs upsilon t x0 x\nupsilon t -> x\nx0 -> x0");
  FDSet plain(no_pivots.catalog());
  plain.add(no_pivots.parse_fd("upsilon t -> x"));
  Relation hx{"HX", {"tid", "phi", "upsilon", "t", "x"}, {}, {{"1", "1", "3", "0", "5"}}};
  WorldTable w2;
  auto y0b = build_explanation(fixture_relation("H0"), w2);
  auto only = synthesize4u(plain, Hypothesis{"3", {}, {hx}}, y0b, w2);
  REQUIRE(only.relations.size() == 1);
  CHECK(only.relations[0].rows[0].cond == Condition{{0, 3}});

  // No endogenous data: u-factors only.
  WorldTable w3;
  auto y0c = build_explanation(fixture_relation("H0"), w3);
  CHECK(synthesize4u(gf, Hypothesis{"3", {h31}, {}}, y0c, w3).relations.size() == 3);

  // A trial with predictions but no exogenous readings.
  WorldTable w4;
  auto y0d = build_explanation(fixture_relation("H0"), w4);
  Relation extra = h32;
  extra.rows.push_back({"7", "1", "3", "0", "1", "1"});
  try {
    synthesize4u(gf, Hypothesis{"3", {h31}, {extra}}, y0d, w4);
    FAIL("orphan trial accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Integrity);
  }

  // A pivot the prediction needs but no exogenous relation holds.
  WorldTable w5;
  auto y0e = build_explanation(fixture_relation("H0"), w5);
  Relation partial = h31;
  for (auto& row : partial.rows) row.resize(4);
  partial.cols = {"tid", "phi", "x0", "b"};
  try {
    synthesize4u(gf, Hypothesis{"3", {partial}, {h32}}, y0e, w5);
    FAIL("missing pivot accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Integrity);
  }
}

// ---- generated hypotheses ---------------------------------------------------

namespace {

struct Generated {
  FDSet sigma;
  std::vector<Relation> exogenous;
  Relation endogenous;
  std::map<std::string, std::set<std::string>> ancestry;  // endogenous -> exogenous inputs
  std::size_t trials = 0;
};

// Exogenous columns e1..e4 spread over one or two relations, some planted as
// bijective images of others; endogenous n1, n2 computed from their inputs
// and t, with n2 optionally reading n1.
Generated generate(std::mt19937_64& rng) {
  const std::size_t n_exo = 2 + rng() % 3;
  std::string decl = "#@attrs t";
  for (std::size_t i = 1; i <= n_exo; ++i) decl += " e" + std::to_string(i);
  decl += " n1 n2\n";
  std::string text = decl;
  for (std::size_t i = 1; i <= n_exo; ++i) text += "phi -> e" + std::to_string(i) + "\n";
  Generated g{parse_fdset(decl), {}, {}, {}, 2 + rng() % 3};

  std::vector<std::set<std::string>> inputs(2);
  for (auto& in : inputs) {
    for (std::size_t i = 1; i <= n_exo; ++i)
      if (rng() % 2) in.insert("e" + std::to_string(i));
    if (in.empty()) in.insert("e" + std::to_string(1 + rng() % n_exo));
  }
  bool chained = rng() % 2;
  auto lhs = [&](std::size_t j) {
    std::string s = "upsilon t";
    for (auto& e : inputs[j]) s += " " + e;
    if (j == 1 && chained) s += " n1";
    return s;
  };
  text += lhs(0) + " -> n1\n" + lhs(1) + " -> n2\n";
  g.sigma = left_reduce(parse_fdset(text));
  g.ancestry["n1"] = inputs[0];
  g.ancestry["n2"] = inputs[1];
  if (chained) g.ancestry["n2"].insert(inputs[0].begin(), inputs[0].end());

  // Trial readings. A planted column copies another through a bijection.
  std::vector<std::vector<std::string>> reading(g.trials, std::vector<std::string>(n_exo));
  for (std::size_t i = 0; i < n_exo; ++i) {
    bool planted = i > 0 && rng() % 3 == 0;
    for (std::size_t tr = 0; tr < g.trials; ++tr)
      reading[tr][i] = planted ? "m" + reading[tr][i - 1] : std::to_string(rng() % 3);
  }
  std::size_t split = (n_exo > 2 && rng() % 2) ? 2 : n_exo;
  for (std::size_t part = 0; part * split < n_exo; ++part) {
    Relation rel{"E" + std::to_string(part + 1), {"tid", "phi"}, {}, {}};
    std::size_t lo = part * split, hi = std::min(n_exo, lo + split);
    for (std::size_t i = lo; i < hi; ++i) rel.cols.push_back("e" + std::to_string(i + 1));
    for (std::size_t tr = 0; tr < g.trials; ++tr) {
      std::vector<std::string> row = {std::to_string(tr + 1), "1"};
      for (std::size_t i = lo; i < hi; ++i) row.push_back(reading[tr][i]);
      rel.rows.push_back(row);
    }
    g.exogenous.push_back(rel);
  }

  g.endogenous = Relation{"N", {"tid", "phi", "upsilon", "t", "n1", "n2"}, {}, {}};
  auto value_of = [&](std::size_t tr, const std::set<std::string>& in, int t) {
    std::string v = "v" + std::to_string(t);
    for (auto& e : in) v += "_" + reading[tr][std::stoul(e.substr(1)) - 1];
    return v;
  };
  for (std::size_t tr = 0; tr < g.trials; ++tr)
    for (int t = 0; t < 2; ++t)
      g.endogenous.rows.push_back({std::to_string(tr + 1), "1", "1", std::to_string(t), value_of(tr, g.ancestry["n1"], t),
                                   value_of(tr, g.ancestry["n2"], t)});
  return g;
}

Relation h0_two() { return Relation{"H0", {"phi", "upsilon", "Conf"}, {}, {{"1", "1", "3"}, {"1", "2", "1"}}}; }

std::string decoded_pivot(const URelation& y, const std::vector<ValueId>& theta) {
  auto d = decode(y, theta);
  REQUIRE(d.rows.size() == 1);
  return d.rows[0][1];
}

}  // namespace

TEST_CASE("property: generated hypotheses capture trials exactly") {
  auto rng = rng_for(51);
  for (int iter = 0; iter < 60; ++iter) {
    auto g = generate(rng);
    std::vector<UFactorGroups> learned;
    for (auto& e : g.exogenous) learned.push_back(learn_u_factors(e, g.sigma));
    auto gf = fold_gamma(combine_gamma(g.sigma, learned));
    REQUIRE(is_parsimonious(gf));
    WorldTable w;
    auto y0 = build_explanation(h0_two(), w);
    Hypothesis h{"1", g.exogenous, {g.endogenous}};
    auto r = synthesize4u(gf, h, y0, w);

    std::size_t n_pivots = 0;
    for (auto& l : learned) n_pivots += l.pivots.size();
    REQUIRE(r.relations.size() >= n_pivots + 1);
    std::vector<const URelation*> factors, predictions;
    for (std::size_t i = 0; i < r.relations.size(); ++i) (i < n_pivots ? factors : predictions).push_back(&r.relations[i]);

    // Pivot of each column, and the exogenous value table per trial.
    std::map<std::string, std::string> pivot_of;
    for (std::size_t e = 0; e < learned.size(); ++e)
      for (std::size_t gi = 0; gi < learned[e].groups.size(); ++gi)
        learned[e].groups[gi].for_each([&](AttrId a) { pivot_of[g.sigma.cat().name(a)] = g.sigma.cat().name(learned[e].pivots[gi]); });
    std::map<std::string, const URelation*> factor_of;
    for (auto* f : factors) factor_of[f->cols[1]] = f;
    auto trial_value = [&](std::size_t tr, const std::string& col) {
      for (auto& e : g.exogenous)
        if (e.has(col)) return e.rows[tr][e.col(col)];
      return std::string();
    };

    std::set<std::size_t> hit;
    double total = 0;
    for_each_world(w, 100000, [&](const World& world) {
      total += world.pr;
      bool chosen = world.theta[0] == 1;  // x0 -> 1 is upsilon = 1
      for (auto* y : predictions) {
        std::set<std::string> needed;
        for (auto& c : y->cols)
          if (g.ancestry.count(c))
            for (auto& e : g.ancestry.at(c)) needed.insert(pivot_of.at(e));
        std::set<std::vector<std::string>> expect;
        for (std::size_t tr = 0; tr < g.trials && chosen; ++tr) {
          bool agrees = true;
          for (auto& p : needed) agrees = agrees && same_value(decoded_pivot(*factor_of.at(p), world.theta), trial_value(tr, p));
          if (!agrees) continue;
          for (auto& row : g.endogenous.rows) {
            if (row[0] != std::to_string(tr + 1)) continue;
            std::vector<std::string> projected;
            for (auto& c : y->cols) projected.push_back(row[g.endogenous.col(c)]);
            expect.insert(projected);
            hit.insert(tr);
          }
        }
        auto got = decode(*y, world.theta);
        CHECK(std::set<std::vector<std::string>>(got.rows.begin(), got.rows.end()) == expect);
        // explanation variable plus one variable per needed pivot
        for (auto& row : y->rows) CHECK(row.cond.size() == 1 + needed.size());
      }
    });
    CHECK(total == doctest::Approx(1.0));
    if (!predictions.empty()) CHECK(hit.size() == g.trials);

    // u-factors of one relation are independent and join losslessly.
    for (std::size_t a = 0; a < factors.size(); ++a)
      for (std::size_t b = a + 1; b < factors.size(); ++b) {
        auto j = u_join(*factors[a], *factors[b], {"phi"});
        for (auto& ra : factors[a]->rows)
          for (auto& rb : factors[b]->rows) {
            double joint = 0;
            for_each_world(w, 100000, [&](const World& world) {
              if (satisfied(ra.cond, world.theta) && satisfied(rb.cond, world.theta)) joint += world.pr;
            });
            CHECK(joint == doctest::Approx(world_probability(w, {ra.cond[0]}) * world_probability(w, {rb.cond[0]})));
          }
        for_each_world(w, 100000, [&](const World& world) { CHECK(decode(j, world.theta).rows.size() == 1); });
      }
  }
}
