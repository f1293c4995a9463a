// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "fd/fdset.hpp"
#include "sem/causal.hpp"

namespace hypc {

// Primitive FD set of a hypothesis: phi -> x for exogenous variables and
// (Z - x) + upsilon -> x for the others. The catalog declares the reserved
// attributes, then the structure's variables in order.
FDSet h_encode(const Structure& s, const CausalMapping& m);
FDSet h_encode(const Structure& s);

enum class AttrClass { Epistemic, Exogenous, Endogenous, Domain };

AttrClass classify(AttrId a, const FDSet& sigma);
std::string_view to_string(AttrClass c);

}  // namespace hypc
