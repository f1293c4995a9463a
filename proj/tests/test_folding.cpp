// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>

#include "common/error.hpp"
#include "fd/reasoning.hpp"
#include "folding/folding.hpp"
#include "test_support.hpp"

using namespace hypc;
using namespace hypc::test;

namespace {

FDSet shuffled(const FDSet& s, std::mt19937_64& rng) {
  auto v = s.fds();
  std::shuffle(v.begin(), v.end(), rng);
  FDSet out(s.catalog(), s.universe());
  for (auto& f : v) out.add(f);
  return out;
}

bool acyclic(const FDSet& s) {
  auto c = detail::FoldingIndex(s).component;
  std::sort(c.begin(), c.end());
  return std::adjacent_find(c.begin(), c.end()) == c.end();
}

// Attributes that sit on a cycle of the dependency graph.
AttrSet on_cycles(const FDSet& s) {
  auto c = detail::FoldingIndex(s).component;
  AttrSet out;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j)
      if (i != j && c[i] == c[j]) out.insert(static_cast<AttrId>(i));
  return out;
}

FDSet cycle(std::size_t k) {
  std::string text;
  for (std::size_t i = 1; i <= k; ++i) text += "A" + std::to_string(i) + " -> A" + std::to_string(i % k + 1) + "\n";
  return fds(text);
}

}  // namespace

TEST_CASE("attribute folding examples") {
  auto fig = load_fds("seven_var.fd");
  FoldingTrace t;
  CHECK(afolding(fig, fig.cat().at("x6"), &t) == fig.parse_attrs("phi upsilon x5"));
  CHECK(t.lambda == fig.parse_attrs("x6 x4 x1 x2 x3"));

  auto two = fds("A -> B\nB -> A");
  CHECK(afolding(two, two.cat().at("B")) == two.parse_attrs("A"));
  auto chain = fds("A -> B\nB -> C");
  CHECK(afolding(chain, chain.cat().at("C")) == chain.parse_attrs("A"));

  CHECK_THROWS_AS(afolding(chain, chain.cat().at("A")), Error);
  auto bad = fds("A -> C\nB -> C");
  CHECK_THROWS_AS(afolding(bad, bad.cat().at("C")), Error);
}

TEST_CASE("folding examples") {
  auto fig = load_fds("seven_var.fd");
  auto r = folding(fig);
  CHECK(r.folded.same_as(load_fds("seven_var_folded.fd")));
  CHECK(r.folded.size() == fig.size());
  CHECK(r.trace.size() == fig.size());

  auto g3 = load_fds("lv_pivots.fd");
  CHECK(folding(g3).folded.same_as(load_fds("lv_pivots_folded.fd")));

  auto two = fds("A -> B\nB -> A");
  CHECK(folding(two).folded.same_as(two));
  CHECK(folding(fds("A -> B\nB -> C")).folded.same_as(fds("A -> B\nA -> C")));
}

TEST_CASE("folded predicate examples") {
  auto fig = load_fds("seven_var.fd");
  CHECK(is_folded(fig, fig.parse_fd("phi upsilon x5 -> x6")));
  CHECK_FALSE(is_folded(fig, fig.parse_fd("x4 upsilon -> x6")));
  CHECK_FALSE(is_folded(fig, fig.parse_fd("x4 x6 -> x6")));
  // Only the ancestry of the rhs is enumerated, so unrelated attributes are free.
  auto spread = fds("#@attrs A B C D E F G H I J K L M\nA -> B");
  CHECK(is_folded(spread, spread.parse_fd("A -> B")));
  std::string text;
  for (int i = 1; i < 12; ++i) text += "A" + std::to_string(i) + " -> A" + std::to_string(i + 1) + "\n";
  auto deep = fds(text);
  CHECK_THROWS_AS(is_folded(deep, deep.parse_fd("A11 -> A12")), Error);
}

TEST_CASE("cycles halt and fold to a single member") {
  for (std::size_t k = 2; k <= 6; ++k) {
    auto s = cycle(k);
    auto f = folding(s).folded;
    CHECK(f.size() == k);
    for (auto& fd : f) {
      CHECK(fd.lhs.size() == 1);
      CHECK(is_folded(s, fd));
    }
    for (std::size_t i = 1; i <= k; ++i) {
      AttrId a = s.cat().at("A" + std::to_string(i));
      AttrId prev = s.cat().at("A" + std::to_string((i + k - 2) % k + 1));
      CHECK(afolding(s, a) == AttrSet{prev});
    }
  }
}

TEST_CASE("scan-order folding mistakes an already folded attribute for a cycle") {
  auto s = fds("upsilon v3 v4 -> v2\nupsilon v1 -> v4\nupsilon t v4 -> v3\nphi -> v1");
  AttrId v2 = s.cat().at("v2");
  CHECK(detail::afolding_scan(s, v2, nullptr) == s.parse_attrs("phi upsilon t v3"));
  CHECK(afolding(s, v2) == s.parse_attrs("phi upsilon t"));
  CHECK(is_parsimonious(folding(s).folded));
}

TEST_CASE("on cycles the folded predicate and reduced sides cannot both hold") {
  auto s = fds("C -> A\nD -> C\nA E F -> D\nD E G -> F\nA B -> G\nD -> H");
  AttrId d = s.cat().at("D");
  auto u = s.universe().ids();
  std::size_t folded_and_reduced = 0;
  for (std::uint32_t mask = 1; mask < (1u << u.size()); ++mask) {
    AttrSet z;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (mask & (1u << i)) z.insert(u[i]);
    if (z.contains(d) || !member(s, FD{z, AttrSet{d}})) continue;
    bool reduced = true;
    z.for_each([&](AttrId x) {
      AttrSet w = z;
      w.erase(x);
      if (!w.empty() && member(s, FD{w, AttrSet{d}})) reduced = false;
    });
    if (reduced && is_folded(s, FD{z, AttrSet{d}})) ++folded_and_reduced;
  }
  CHECK(folded_and_reduced == 0);
  // Both forms give up reducedness against the input; the result is reduced
  // against the folded set instead.
  auto scan = detail::afolding_scan(s, d, nullptr);
  CHECK(scan == s.parse_attrs("B C E F"));
  CHECK(is_folded(s, FD{scan, AttrSet{d}}));
  auto side = afolding(s, d);
  CHECK(side == s.parse_attrs("A B E F"));
  CHECK(is_folded(s, FD{side, AttrSet{d}}));
  auto f = folding(s).folded;
  CHECK(is_parsimonious(f));
  CHECK(left_reduce(f).same_as(f));
}

TEST_CASE("property: folding of random parsimonious sets") {
  auto rng = rng_for(21);
  for (int iter = 0; iter < 200; ++iter) {
    auto s = random_parsimonious(rng, 8);
    auto r = folding(s);
    CHECK(r.folded.size() == s.size());
    CHECK_MESSAGE(is_parsimonious(r.folded), to_text(s));
    auto oracle = closure_oracle(s);
    bool plain = acyclic(s);
    AttrSet looped = on_cycles(s);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const FD& f = r.folded.fds()[i];
      CHECK(f.rhs == s.fds()[i].rhs);
      CHECK(oracle.contains(f));
      if (plain) CHECK_MESSAGE(is_folded(s, f), to_text(s), s.format(f));
      // nothing left to unfold: every lhs attribute is undetermined or cyclic
      f.lhs.for_each([&](AttrId z) {
        bool source = std::none_of(s.begin(), s.end(), [&](const FD& g) { return g.rhs.contains(z); });
        CHECK((source || looped.contains(z)));
      });
    }
    for (int perm = 0; perm < 3; ++perm) {
      auto t = shuffled(s, rng);
      for (auto& f : s) CHECK(afolding(t, f.rhs.first()) == afolding(s, f.rhs.first()));
    }
  }
}
