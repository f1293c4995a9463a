// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "synth4c/schema.hpp"

namespace hypc {

struct Verdict {
  bool ok = true;
  std::optional<std::size_t> scheme;  // index of the violating scheme
  std::optional<FD> witness;

  std::string describe(const Schema& schema) const;
};

// BCNF. With a canonical sigma only sigma's FDs are inspected; otherwise every
// subset of each scheme is checked (capacity error past `cap` attributes).
Verdict is_bcnf(const Schema& schema, const FDSet& sigma, std::size_t cap = 12);

// 3NF with prime attributes found by key enumeration per scheme.
Verdict is_3nf(const Schema& schema, const FDSet& sigma, std::size_t cap = 12);

// Restricted-closure test: every FD of sigma follows from the FDs that hold
// inside some scheme.
bool preserves(const Schema& schema, const FDSet& sigma);

// Same question through explicit projection of the closure onto each scheme;
// nullopt when a scheme exceeds `cap` attributes.
std::optional<bool> preserves_by_projection(const Schema& schema, const FDSet& sigma, std::size_t cap = 12);

// Lossless join for a schema that preserves sigma, as synthesized schemas do:
// some scheme's closure covers U. Precondition error when sigma is not
// preserved, since the superkey test is then only sufficient.
bool lossless_join(const Schema& schema, const FDSet& sigma);

// Tableau chase; capacity error past `cap` attributes.
bool chase_oracle(const Schema& schema, const FDSet& sigma, std::size_t cap = 12);

// Candidate keys of `attrs` under sigma, in subset enumeration order.
std::vector<AttrSet> candidate_keys(const FDSet& sigma, const AttrSet& attrs, std::size_t cap = 12);

namespace detail {
Verdict bcnf_exhaustive(const Schema& schema, const FDSet& sigma, std::size_t cap);
Verdict bcnf_shortcut(const Schema& schema, const FDSet& sigma);
// Each key determines U or sits strictly inside another scheme's key. Sound
// but incomplete: a shared attribute that is a non-key determinant suffices.
bool lossless_by_key_containment(const Schema& schema, const FDSet& sigma);
}  // namespace detail

}  // namespace hypc
