// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "fd/fdset.hpp"

namespace hypc {

struct FoldingTrace {
  std::vector<FD> consumed;  // FDs walked through, in walk order
  AttrSet lambda;            // attributes replaced by their determinants
};

struct FoldingResult {
  FDSet folded;
  std::vector<FoldingTrace> trace;  // parallel to folded.fds()
};

// Attribute folding of a: the determinant of a pushed as far back along the
// FDs as it goes without closing a cycle. Requires a parsimonious sigma with
// an FD for a.
//
// Without cycles upstream of a this is the set of undetermined attributes a
// descends from. With cycles, each cycle contributes a minimal set of members
// that, together with what lies upstream, determines the whole cycle. The
// walk's own choice of members is kept when it is consistent across every
// attribute sharing a's closure class; otherwise a fixed per-cycle choice is
// used so the folded set stays parsimonious and its keys stay equivalent.
AttrSet afolding(const FDSet& sigma, AttrId a, FoldingTrace* trace = nullptr);

// One FD afolding(A) -> A per input FD X -> A, in input order.
FoldingResult folding(const FDSet& sigma);

// Folded check by subset enumeration: fd is non-trivial and no Y inside the
// ancestry of its rhs with Y ⊉ X has Y -> X and X -/-> Y. Capacity error when
// that ancestry exceeds `cap` attributes.
bool is_folded(const FDSet& sigma, const FD& fd, std::size_t cap = 10);

// Attributes a depends on through sigma, a included.
AttrSet ancestry(const FDSet& sigma, AttrId a);

namespace detail {

// Per-attribute FD index and components of the attribute dependency graph.
// Component ids grow downstream: a component's ancestors have smaller ids.
struct FoldingIndex {
  std::vector<std::ptrdiff_t> fd_of;  // -1 when no FD determines the attribute
  std::vector<std::size_t> component;
  std::vector<std::vector<AttrId>> members;
  explicit FoldingIndex(const FDSet& sigma);
  bool cyclic(AttrId a) const { return members[component[a]].size() > 1; }
};

// Layered backward walk from a. Each cycle is entered once: the first member
// reached (lowest id within a layer) is replaced by its determinant and the
// other members are kept. Returns the kept attributes; `order` receives the
// reached attributes in walk order.
AttrSet afolding_walk(const FDSet& sigma, const FoldingIndex& index, AttrId a, FoldingTrace* trace,
                      std::vector<AttrId>* order = nullptr);

// Scan-order form: one pass over the FDs per round, folding B away unless the
// consumed FD's lhs meets an attribute folded earlier. Kept for comparison;
// it depends on FD order and can return non-reduced sides.
AttrSet afolding_scan(const FDSet& sigma, AttrId a, FoldingTrace* trace);

}  // namespace detail

}  // namespace hypc
