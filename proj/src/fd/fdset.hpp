// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fd/attribute.hpp"

namespace hypc {

struct FD {
  AttrSet lhs;
  AttrSet rhs;

  bool trivial() const { return rhs.subset_of(lhs); }
  AttrSet attrs() const { return lhs | rhs; }
  bool operator==(const FD&) const = default;
  auto operator<=>(const FD& o) const {
    if (auto c = lhs <=> o.lhs; c != 0) return c;
    return rhs <=> o.rhs;
  }
};

// Ordered set of FDs over a universe of attributes. Insertion order is kept
// and duplicates are dropped.
class FDSet {
 public:
  explicit FDSet(CatalogPtr catalog);
  FDSet(CatalogPtr catalog, AttrSet universe);

  const CatalogPtr& catalog() const noexcept { return catalog_; }
  const Catalog& cat() const noexcept { return *catalog_; }
  const AttrSet& universe() const noexcept { return universe_; }
  const std::vector<FD>& fds() const noexcept { return fds_; }
  std::size_t size() const noexcept { return fds_.size(); }
  bool empty() const noexcept { return fds_.empty(); }
  auto begin() const { return fds_.begin(); }
  auto end() const { return fds_.end(); }

  // Adds fd, growing the universe to cover it. Returns false for duplicates.
  bool add(const FD& fd);
  bool contains(const FD& fd) const { return index_.count(fd) != 0; }
  void extend_universe(const AttrSet& attrs);

  // Parses "A B -> C" against this set's catalog. Unknown names are a domain error.
  FD parse_fd(std::string_view text) const;
  AttrSet parse_attrs(std::string_view text) const { return catalog_->parse(text); }
  std::string format(const FD& fd) const;

  // Set equality by attribute names; catalogs may differ.
  bool same_as(const FDSet& other) const;
  std::set<std::pair<std::vector<std::string>, std::vector<std::string>>> named() const;

 private:
  CatalogPtr catalog_;
  AttrSet universe_;
  std::vector<FD> fds_;
  std::set<FD> index_;
};

// Text format: one FD per line, "A B -> C D"; '#' starts a comment. A line
// "#@attrs a b c" declares attributes (and their order) ahead of use.
FDSet parse_fdset(std::string_view text, CatalogPtr base = nullptr);
std::string to_text(const FDSet& sigma);

}  // namespace hypc
