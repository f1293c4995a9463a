// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fd/attribute.hpp"

namespace hypc {

// Index sets over equations or variables reuse the attribute bitset.
using IndexSet = AttrSet;

struct Equation {
  std::string id;
  IndexSet vars;  // variable indices
};

// A system of equations with the variables each one mentions. The first
// `domain_prefix` variables are domain variables (e.g. time).
struct Structure {
  std::vector<std::string> variables;
  std::size_t domain_prefix = 0;
  std::vector<Equation> equations;

  std::size_t var_index(std::string_view name) const;
  bool is_domain(std::size_t var) const { return var < domain_prefix; }

  // Accepts {"variables", "domain_prefix", "equations": [{"id","vars"}], "matrix"}.
  // Either equations or matrix may be omitted; when both are given they must agree.
  static Structure from_json(std::string_view text);
  std::string to_json() const;
};

// |E| = |V|.
bool check_complete(const Structure& s);

// Throws unless the structure is complete, no k equations mention fewer than
// k variables, and the leading domain equations mention only domain variables.
void require_well_formed(const Structure& s);

}  // namespace hypc
