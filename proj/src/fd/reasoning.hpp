// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "fd/fdset.hpp"

namespace hypc {

// Closure X+ of x under sigma. x must be non-empty and inside the universe.
AttrSet xclosure(const FDSet& sigma, const AttrSet& x);

// X -> Y is in sigma's closure.
bool member(const FDSet& sigma, const FD& fd);

// Removes extraneous left-hand attributes, scanning FDs in order and each
// left-hand side in attribute order.
FDSet left_reduce(const FDSet& sigma);

// Merges FDs sharing a left-hand side (first-appearance order).
FDSet union_rule(const FDSet& sigma);

// Splits every FD into singleton right-hand sides.
FDSet decompose(const FDSet& sigma);

bool equivalent(const FDSet& a, const FDSet& b);

struct CanonicalReport {
  enum class Clause { None, SingletonRhs, NonRedundant, LeftReduced, UniqueLhs };
  Clause clause = Clause::None;
  std::optional<FD> witness;

  bool ok() const { return clause == Clause::None; }
  std::string describe(const FDSet& sigma) const;
};

CanonicalReport check_canonical(const FDSet& sigma);
CanonicalReport check_parsimonious(const FDSet& sigma);
inline bool is_canonical(const FDSet& sigma) { return check_canonical(sigma).ok(); }
inline bool is_parsimonious(const FDSet& sigma) { return check_parsimonious(sigma).ok(); }

// Exhaustive fixpoint of the inference rules over every subset of the
// universe; returns all non-trivial X -> A. Capacity error past `cap` attributes.
FDSet closure_oracle(const FDSet& sigma, std::size_t cap = 10);

namespace detail {
AttrSet closure_unchecked(const FDSet& sigma, const AttrSet& x);
AttrSet xclosure_simple(const FDSet& sigma, const AttrSet& x);
AttrSet xclosure_linear(const FDSet& sigma, const AttrSet& x);
// Linear closure ignoring the FD at index `skip`.
AttrSet closure_skipping(const FDSet& sigma, const AttrSet& x, std::size_t skip);
}  // namespace detail

}  // namespace hypc
