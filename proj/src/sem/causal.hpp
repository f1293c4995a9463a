// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "sem/structure.hpp"

namespace hypc {

struct CausalMapping {
  std::vector<std::size_t> var_of_eq;        // equation index -> variable index
  std::vector<std::size_t> layer_of_var;     // variable index -> elimination depth
  std::vector<std::vector<std::size_t>> coupled_groups;  // variable index sets, |group| > 1

  std::size_t eq_of_var(std::size_t v) const;
};

// Minimal complete substructures of s, as sorted equation-index lists ordered
// by their first equation.
std::vector<std::vector<std::size_t>> minimal_substructures(const Structure& s);

// Total causal mapping by recursive elimination of minimal substructures.
CausalMapping coa_t(const Structure& s);

// Edges x_j -> x_l where x_j occurs in the equation mapped to x_l.
std::vector<std::pair<std::size_t, std::size_t>> causal_graph(const Structure& s, const CausalMapping& m);

namespace detail {

// Residual view: the given equations restricted to the given variables.
struct Residual {
  std::vector<std::size_t> eqs;
  IndexSet vars;
};

std::vector<std::vector<std::size_t>> minimal_by_enumeration(const Structure& s, const Residual& r);
std::vector<std::vector<std::size_t>> minimal_by_matching(const Structure& s, const Residual& r);

}  // namespace detail

}  // namespace hypc
