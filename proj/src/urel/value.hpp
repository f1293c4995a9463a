// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace hypc {

// Cell values are kept as written. Comparisons go through a canonical form in
// which decimal literals that denote the same number coincide ("0.50", ".5",
// "5e-1"); anything else compares as plain text.
std::string canonical_value(std::string_view v);
bool same_value(std::string_view a, std::string_view b);

// Numeric reading for weights and probabilities; nullopt when not a number.
std::optional<double> numeric_value(std::string_view v);

// Total order used by predicates: numbers by value, numbers before text,
// text lexicographically.
int compare_values(std::string_view a, std::string_view b);

// Shortest text that reads back to the same double.
std::string format_double(double v);

}  // namespace hypc
