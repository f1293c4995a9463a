// SPDX-License-Identifier: Apache-2.0
#include "sem/causal.hpp"

#include <algorithm>

#include "common/error.hpp"
#include "common/graph.hpp"
#include "sem/matching.hpp"

namespace hypc {

std::size_t CausalMapping::eq_of_var(std::size_t v) const {
  for (std::size_t e = 0; e < var_of_eq.size(); ++e)
    if (var_of_eq[e] == v) return e;
  fail(ErrorKind::Domain, "variable is not mapped");
}

namespace detail {
namespace {

constexpr std::size_t kEnumerationLimit = 16;

[[noreturn]] void malformed() {
  fail(ErrorKind::Precondition, "malformed structure: some k equations mention fewer than k variables");
}

void sort_blocks(std::vector<std::vector<std::size_t>>& blocks) {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end());
}

}  // namespace

std::vector<std::vector<std::size_t>> minimal_by_enumeration(const Structure& s, const Residual& r) {
  const std::size_t m = r.eqs.size();
  std::vector<IndexSet> vars(m);
  for (std::size_t i = 0; i < m; ++i) vars[i] = s.equations[r.eqs[i]].vars & r.vars;

  std::vector<std::vector<std::size_t>> found;
  std::vector<IndexSet> found_sets;
  for (std::size_t k = 1; k <= m; ++k) {
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      IndexSet chosen;
      IndexSet mentioned;
      for (std::size_t i : pick) {
        chosen.insert(static_cast<AttrId>(i));
        mentioned |= vars[i];
      }
      std::size_t width = mentioned.size();
      if (width < k) malformed();
      if (width == k) {
        bool contains_found = std::any_of(found_sets.begin(), found_sets.end(),
                                          [&](const IndexSet& f) { return f.subset_of(chosen); });
        if (!contains_found) {
          std::vector<std::size_t> block;
          for (std::size_t i : pick) block.push_back(r.eqs[i]);
          found.push_back(std::move(block));
          found_sets.push_back(chosen);
        }
      }
      // next combination in lexicographic order
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == m - k + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  sort_blocks(found);
  return found;
}

std::vector<std::vector<std::size_t>> minimal_by_matching(const Structure& s, const Residual& r) {
  const std::size_t m = r.eqs.size();
  auto var_ids = r.vars.ids();
  std::vector<std::size_t> column(s.variables.size(), kUnmatched);
  for (std::size_t c = 0; c < var_ids.size(); ++c) column[var_ids[c]] = c;

  std::vector<std::vector<std::size_t>> adj(m);
  for (std::size_t i = 0; i < m; ++i)
    (s.equations[r.eqs[i]].vars & r.vars).for_each([&](AttrId v) { adj[i].push_back(column[v]); });
  BipartiteMatcher matcher(adj, var_ids.size());
  if (matcher.run() != m) malformed();
  std::vector<std::size_t> eq_of_col(var_ids.size());
  for (std::size_t i = 0; i < m; ++i) eq_of_col[matcher.right_of()[i]] = i;

  // Equation i depends on equation j when i mentions the variable matched to j.
  std::vector<std::vector<std::size_t>> dep(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t c : adj[i])
      if (eq_of_col[c] != i) dep[i].push_back(eq_of_col[c]);

  std::size_t n_comp = 0;
  auto comp = strong_components(dep, &n_comp);

  // Components with no dependency outside themselves are the minimal ones.
  std::vector<bool> sink(n_comp, true);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j : dep[i])
      if (comp[j] != comp[i]) sink[comp[i]] = false;
  std::vector<std::vector<std::size_t>> blocks(n_comp);
  for (std::size_t i = 0; i < m; ++i)
    if (sink[comp[i]]) blocks[comp[i]].push_back(r.eqs[i]);
  std::erase_if(blocks, [](const auto& b) { return b.empty(); });
  sort_blocks(blocks);
  return blocks;
}

}  // namespace detail

namespace {

detail::Residual full_residual(const Structure& s) {
  detail::Residual r;
  for (std::size_t e = 0; e < s.equations.size(); ++e) r.eqs.push_back(e);
  for (std::size_t v = 0; v < s.variables.size(); ++v) r.vars.insert(static_cast<AttrId>(v));
  return r;
}

std::vector<std::vector<std::size_t>> minimal_of(const Structure& s, const detail::Residual& r) {
  return r.eqs.size() <= detail::kEnumerationLimit ? detail::minimal_by_enumeration(s, r)
                                                   : detail::minimal_by_matching(s, r);
}

bool perfectly_matchable(const Structure& s, const std::vector<std::size_t>& eqs, const IndexSet& vars) {
  auto ids = vars.ids();
  if (ids.size() != eqs.size()) return false;
  std::vector<std::vector<std::size_t>> adj(eqs.size());
  for (std::size_t i = 0; i < eqs.size(); ++i)
    for (std::size_t c = 0; c < ids.size(); ++c)
      if (s.equations[eqs[i]].vars.contains(ids[c])) adj[i].push_back(c);
  detail::BipartiteMatcher m(adj, ids.size());
  return m.run() == eqs.size();
}

}  // namespace

std::vector<std::vector<std::size_t>> minimal_substructures(const Structure& s) {
  if (!check_complete(s))
    fail(ErrorKind::Precondition, "incomplete structure: |E|=" + std::to_string(s.equations.size()) +
                                      ", |V|=" + std::to_string(s.variables.size()));
  return minimal_of(s, full_residual(s));
}

CausalMapping coa_t(const Structure& s) {
  require_well_formed(s);
  CausalMapping out;
  out.var_of_eq.assign(s.equations.size(), detail::kUnmatched);
  out.layer_of_var.assign(s.variables.size(), 0);

  auto residual = full_residual(s);
  std::size_t depth = 0;
  while (!residual.eqs.empty()) {
    auto blocks = minimal_of(s, residual);
    if (blocks.empty()) fail(ErrorKind::Precondition, "malformed structure: no minimal substructure");
    for (auto& block : blocks) {
      IndexSet free;
      for (std::size_t e : block) free |= s.equations[e].vars & residual.vars;
      if (block.size() > 1) {
        std::vector<std::size_t> group;
        free.for_each([&](AttrId v) { group.push_back(v); });
        out.coupled_groups.push_back(std::move(group));
      }
      // Lowest variable first, keeping the rest of the block matchable.
      for (std::size_t i = 0; i < block.size(); ++i) {
        std::size_t e = block[i];
        std::vector<std::size_t> rest(block.begin() + static_cast<std::ptrdiff_t>(i) + 1, block.end());
        bool placed = false;
        for (AttrId v : (s.equations[e].vars & free).ids()) {
          if (perfectly_matchable(s, rest, free - IndexSet{v})) {
            out.var_of_eq[e] = v;
            out.layer_of_var[v] = depth;
            free.erase(v);
            placed = true;
            break;
          }
        }
        if (!placed) fail(ErrorKind::Precondition, "malformed structure: block has no perfect matching");
      }
    }
    for (auto& block : blocks)
      for (std::size_t e : block) {
        residual.vars.erase(static_cast<AttrId>(out.var_of_eq[e]));
        std::erase(residual.eqs, e);
      }
    ++depth;
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> causal_graph(const Structure& s, const CausalMapping& m) {
  if (m.var_of_eq.size() != s.equations.size()) fail(ErrorKind::Domain, "mapping does not cover the structure");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t e = 0; e < s.equations.size(); ++e) {
    std::size_t target = m.var_of_eq[e];
    s.equations[e].vars.for_each([&](AttrId v) {
      if (v != target) edges.emplace_back(v, target);
    });
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

}  // namespace hypc
