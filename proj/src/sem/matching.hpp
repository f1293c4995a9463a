// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace hypc::detail {

inline constexpr std::size_t kUnmatched = static_cast<std::size_t>(-1);

// Maximum bipartite matching by augmenting paths. adj[l] lists the right
// nodes adjacent to left node l. Returns the right node matched to each
// left node, or kUnmatched.
class BipartiteMatcher {
 public:
  BipartiteMatcher(const std::vector<std::vector<std::size_t>>& adj, std::size_t n_right)
      : adj_(adj), left_of_(n_right, kUnmatched), right_of_(adj.size(), kUnmatched) {}

  std::size_t run() {
    std::size_t size = 0;
    for (std::size_t l = 0; l < adj_.size(); ++l) {
      seen_.assign(left_of_.size(), false);
      if (augment(l)) ++size;
    }
    return size;
  }

  const std::vector<std::size_t>& right_of() const { return right_of_; }

 private:
  bool augment(std::size_t l) {
    for (std::size_t r : adj_[l]) {
      if (seen_[r]) continue;
      seen_[r] = true;
      if (left_of_[r] == kUnmatched || augment(left_of_[r])) {
        left_of_[r] = l;
        right_of_[l] = r;
        return true;
      }
    }
    return false;
  }

  const std::vector<std::vector<std::size_t>>& adj_;
  std::vector<std::size_t> left_of_;
  std::vector<std::size_t> right_of_;
  std::vector<bool> seen_;
};

}  // namespace hypc::detail
