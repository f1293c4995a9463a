// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace hypc::detail {

// Strongly connected components (Tarjan, iterative). Returns the component id
// of each vertex; ids are assigned in reverse topological order.
inline std::vector<std::size_t> strong_components(const std::vector<std::vector<std::size_t>>& adj,
                                                  std::size_t* n_components = nullptr) {
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  const std::size_t n = adj.size();
  std::vector<std::size_t> index(n, kNone), low(n, 0), comp(n, kNone);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (vertex, next edge)
  std::size_t counter = 0, count = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kNone) continue;
    call.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      if (edge < adj[v].size()) {
        std::size_t w = adj[v][edge++];
        if (index[w] == kNone) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = count;
        } while (w != done);
        ++count;
      }
    }
  }
  if (n_components) *n_components = count;
  return comp;
}

}  // namespace hypc::detail
