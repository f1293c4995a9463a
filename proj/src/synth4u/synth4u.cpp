// SPDX-License-Identifier: Apache-2.0
#include "synth4u/synth4u.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <set>

#include "common/error.hpp"
#include "synth4c/schema.hpp"
#include "urel/value.hpp"

namespace hypc {

namespace {

const std::string kPhi = "phi";
const std::string kUpsilon = "upsilon";
const std::string kTid = "tid";

bool reserved_column(const std::string& c) { return c == kPhi || c == kTid; }

std::vector<std::string> shared_columns(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out;
  for (auto& c : a)
    if (std::find(b.begin(), b.end(), c) != b.end()) out.push_back(c);
  return out;
}

URelation natural_join(const URelation& a, const URelation& b) { return u_join(a, b, shared_columns(a.cols, b.cols)); }

std::string value_key(const std::string& v, const LearnOptions& opts) {
  if (opts.epsilon > 0)
    if (auto x = numeric_value(v)) return "~" + std::to_string(std::llround(*x / opts.epsilon));
  return canonical_value(v);
}

// Instance FD a -> b: equal a values never meet different b values.
bool determines(const Relation& h, std::size_t a, std::size_t b, const LearnOptions& opts) {
  std::map<std::string, std::string> image;
  for (auto& row : h.rows) {
    auto [it, fresh] = image.emplace(value_key(row[a], opts), value_key(row[b], opts));
    if (!fresh && it->second != value_key(row[b], opts)) return false;
  }
  return true;
}

bool has_upsilon(const FD& fd) { return fd.lhs.contains(Catalog::kUpsilon); }

std::string names(const Catalog& cat, const AttrSet& s) { return cat.format(s); }

}  // namespace

URelation build_explanation(const Relation& h0, WorldTable& w) {
  for (auto* c : {&kPhi, &kUpsilon}) h0.col(*c);
  auto y0 = u_project(repair_key(h0, {kPhi}, "Conf", w), {kPhi, kUpsilon});
  y0.name = "Y0";
  return y0;
}

UFactorGroups learn_u_factors(const Relation& h, const FDSet& sigma_k, const LearnOptions& opts) {
  if (h.rows.empty()) fail(ErrorKind::Precondition, "u-factor learning needs trial rows in " + h.name);
  if (h.has(kUpsilon)) fail(ErrorKind::Precondition, h.name + " carries upsilon; it is not an exogenous relation");
  const Catalog& cat = sigma_k.cat();
  std::vector<std::pair<AttrId, std::size_t>> attrs;  // attribute, column
  for (std::size_t c = 0; c < h.cols.size(); ++c) {
    if (reserved_column(h.cols[c])) continue;
    auto id = cat.find(h.cols[c]);
    if (!id) fail(ErrorKind::Domain, h.name + ": column '" + h.cols[c] + "' is not an attribute of the hypothesis");
    attrs.emplace_back(*id, c);
  }
  std::sort(attrs.begin(), attrs.end());

  std::vector<std::size_t> parent(attrs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < attrs.size(); ++i)
    for (std::size_t j = i + 1; j < attrs.size(); ++j)
      if (determines(h, attrs[i].second, attrs[j].second, opts) && determines(h, attrs[j].second, attrs[i].second, opts))
        parent[root(j)] = root(i);

  UFactorGroups out{{}, {}, FDSet(sigma_k.catalog())};
  std::map<std::size_t, std::size_t> slot;  // union-find root -> group index
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    auto [it, fresh] = slot.emplace(root(i), out.groups.size());
    if (fresh) {
      out.groups.emplace_back();
      out.pivots.push_back(attrs[i].first);  // attrs are sorted, so the first seen is lowest
    }
    out.groups[it->second].insert(attrs[i].first);
  }
  for (std::size_t g = 0; g < out.groups.size(); ++g)
    out.groups[g].for_each([&](AttrId b) {
      if (b != out.pivots[g]) out.gamma.add(FD{AttrSet{out.pivots[g]}, AttrSet{b}});
    });
  for (auto& fd : sigma_k)
    if (has_upsilon(fd)) out.gamma.add(fd);
  return out;
}

FDSet combine_gamma(const FDSet& sigma_k, const std::vector<UFactorGroups>& learned) {
  FDSet out(sigma_k.catalog());
  for (auto& l : learned)
    for (auto& fd : l.gamma)
      if (!has_upsilon(fd)) out.add(fd);
  for (auto& fd : sigma_k)
    if (has_upsilon(fd)) out.add(fd);
  return out;
}

URelation u_factor(const Relation& h, const std::string& pivot, WorldTable& w) {
  std::size_t phi = h.col(kPhi), a = h.col(pivot);
  std::map<std::pair<std::string, std::string>, std::size_t> slot;
  Relation counted{h.name, {kPhi, pivot, "count"}, {}, {}};
  std::vector<std::size_t> counts;
  for (auto& row : h.rows) {
    auto [it, fresh] = slot.emplace(std::make_pair(canonical_value(row[phi]), canonical_value(row[a])), counts.size());
    if (fresh) {
      counts.push_back(0);
      counted.rows.push_back({row[phi], row[a], ""});
    }
    ++counts[it->second];
  }
  for (std::size_t i = 0; i < counts.size(); ++i) counted.rows[i][2] = std::to_string(counts[i]);
  return u_project(repair_key(counted, {kPhi}, "count", w), {kPhi, pivot});
}

URelation u_propagate(const Relation& hq, const AttrSet& s, const AttrSet& t, const FDSet& gamma_fold,
                      const Hypothesis& h, const std::vector<URelation>& factors, const ProjectionMap& m,
                      const URelation& y0) {
  const Catalog& cat = gamma_fold.cat();
  hq.col(kTid);
  hq.col(kPhi);

  // J: exogenous relations meeting s, each with its u-factors on pivots in s.
  std::optional<URelation> j;
  std::set<std::string> covered;
  for (std::size_t i = 0; i < h.exogenous.size(); ++i) {
    const Relation& rel = h.exogenous[i];
    bool meets = false;
    for (auto& c : rel.cols)
      if (!reserved_column(c) && cat.find(c) && s.contains(*cat.find(c))) meets = true;
    if (!meets) continue;
    URelation part = URelation::classical(rel);
    for (auto& e : m.entries) {
      if (e.relation != i || !s.contains(cat.at(e.pivot))) continue;
      part = natural_join(part, factors[e.projection]);
      covered.insert(e.pivot);
    }
    j = j ? natural_join(*j, part) : part;
  }

  // Z_q T in hq's column order: endogenous columns outside t are dropped.
  std::vector<std::string> out_cols;
  for (auto& c : hq.cols) {
    if (c == kTid) continue;
    auto id = cat.find(c);
    bool endogenous = id && std::any_of(gamma_fold.begin(), gamma_fold.end(),
                                        [&](const FD& fd) { return has_upsilon(fd) && fd.rhs.contains(*id); });
    if (!endogenous || t.contains(*id)) out_cols.push_back(c);
  }
  // Non-pivot group members reach the result only through their pivot.
  s.for_each([&](AttrId a) {
    const std::string& name = cat.name(a);
    if (a == Catalog::kPhi || a == Catalog::kUpsilon || hq.has(name) || covered.count(name)) return;
    bool pivot = std::any_of(m.entries.begin(), m.entries.end(), [&](const auto& e) { return e.pivot == name; });
    bool held = std::any_of(h.exogenous.begin(), h.exogenous.end(), [&](const Relation& r) { return r.has(name); });
    if (pivot || !held)
      fail(ErrorKind::Integrity, "no u-factor projection or data column for '" + name + "' needed by " + hq.name);
  });

  URelation data = URelation::classical(hq);
  URelation joined = data;
  if (j) {
    auto keys = u_project(*j, {kTid, kPhi});
    std::set<std::pair<std::string, std::string>> trials;
    for (auto& row : keys.rows) trials.emplace(canonical_value(row.values[0]), canonical_value(row.values[1]));
    std::size_t tid = hq.col(kTid), phi = hq.col(kPhi);
    for (auto& row : hq.rows)
      if (!trials.count({canonical_value(row[tid]), canonical_value(row[phi])}))
        fail(ErrorKind::Integrity, hq.name + ": trial " + row[tid] + " has no exogenous row");
    joined = natural_join(keys, data);
  }
  auto chosen = u_select(y0, Predicate::compare(Predicate::Op::Eq, kUpsilon, h.upsilon));
  return u_project(natural_join(chosen, joined), out_cols);
}

U4Result synthesize4u(const FDSet& gamma_fold, const Hypothesis& h, const URelation& y0, WorldTable& w) {
  const Catalog& cat = gamma_fold.cat();
  FDSet phi_fds(gamma_fold.catalog()), upsilon_fds(gamma_fold.catalog());
  for (auto& fd : gamma_fold) (has_upsilon(fd) ? upsilon_fds : phi_fds).add(fd);

  U4Result out;
  auto name_next = [&] { return "Y" + h.upsilon + "_" + std::to_string(out.relations.size() + 1); };

  // Part I: one u-factor per pivot.
  std::vector<std::string> pivots;
  for (auto& r : synthesize(phi_fds).schemes) {
    if (r.key.size() != 1)
      fail(ErrorKind::Precondition, "exogenous scheme " + r.name + " is keyed by " + names(cat, r.key) + ", not one pivot");
    pivots.push_back(cat.name(r.key.first()));
  }
  for (auto& rel : h.exogenous)
    for (auto& c : rel.cols) {
      if (reserved_column(c)) continue;
      auto id = cat.find(c);
      if (id && phi_fds.universe().contains(*id)) continue;
      if (std::find(pivots.begin(), pivots.end(), c) == pivots.end()) pivots.push_back(c);  // singleton group
    }
  for (auto& p : pivots) {
    auto rel = std::find_if(h.exogenous.begin(), h.exogenous.end(), [&](const Relation& r) { return r.has(p); });
    if (rel == h.exogenous.end()) fail(ErrorKind::Integrity, "no exogenous relation holds pivot '" + p + "'");
    URelation y = u_factor(*rel, p, w);
    y.name = name_next();
    out.map.entries.push_back({static_cast<std::size_t>(rel - h.exogenous.begin()), p, out.relations.size()});
    out.relations.push_back(std::move(y));
  }
  std::vector<URelation> factors = out.relations;

  // Part II: one predictive projection per endogenous scheme with data.
  if (upsilon_fds.empty()) return out;
  AttrSet endogenous;
  for (auto& fd : upsilon_fds) endogenous |= fd.rhs;
  for (auto& r : synthesize(upsilon_fds).schemes) {
    AttrSet t = r.attrs & endogenous;
    AttrSet s = r.attrs - t;
    auto hq = std::find_if(h.endogenous.begin(), h.endogenous.end(), [&](const Relation& rel) {
      bool all = true;
      t.for_each([&](AttrId a) { all = all && rel.has(cat.name(a)); });
      return all;
    });
    if (hq == h.endogenous.end()) continue;
    URelation y = u_propagate(*hq, s, t, gamma_fold, h, factors, out.map, y0);
    y.name = name_next();
    out.relations.push_back(std::move(y));
  }
  return out;
}

}  // namespace hypc
