// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fd/fdset.hpp"

namespace hypc {

struct RelScheme {
  std::string name;
  AttrSet attrs;
  AttrSet key;  // designated key, subset of attrs
};

struct Schema {
  std::vector<RelScheme> schemes;
  FDSet source;

  AttrSet attrs() const;
  const RelScheme* find(std::string_view name) const;

  // [{"name": "R1", "attrs": [...], "key": [...]}, ...]
  std::string to_json() const;
  // Attribute names are resolved against source's catalog.
  static Schema from_json(std::string_view text, const FDSet& source);
};

struct SynthOptions {
  bool force_lossless = false;  // append a scheme holding a key of U when no scheme does
};

// Union by lhs, one scheme per lhs group, merging groups whose left-hand sides
// are equivalent (the first key is kept). Schemes are named R1..Rn.
Schema synthesize(const FDSet& sigma, const SynthOptions& opts = {});

// Minimal key of attrs, removing attributes greedily in attribute order.
AttrSet minimal_key(const FDSet& sigma, const AttrSet& attrs);

}  // namespace hypc
