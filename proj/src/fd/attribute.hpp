// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hypc {

using AttrId = std::uint32_t;

enum class AttrKind { Phenomenon, Hypothesis, Trial, User };

// Set of attribute ids. Iteration is in ascending id order, which is the
// catalog's declaration order.
class AttrSet {
 public:
  AttrSet() = default;
  AttrSet(std::initializer_list<AttrId> ids);
  explicit AttrSet(const std::vector<AttrId>& ids);

  bool empty() const noexcept { return words_.empty(); }
  std::size_t size() const noexcept;
  bool contains(AttrId a) const noexcept;
  void insert(AttrId a);
  void erase(AttrId a);

  AttrSet& operator|=(const AttrSet& o);
  AttrSet& operator&=(const AttrSet& o);
  AttrSet& operator-=(const AttrSet& o);
  friend AttrSet operator|(AttrSet a, const AttrSet& b) { return a |= b; }
  friend AttrSet operator&(AttrSet a, const AttrSet& b) { return a &= b; }
  friend AttrSet operator-(AttrSet a, const AttrSet& b) { return a -= b; }

  bool subset_of(const AttrSet& o) const noexcept;
  bool proper_subset_of(const AttrSet& o) const noexcept { return subset_of(o) && !(*this == o); }
  bool intersects(const AttrSet& o) const noexcept;

  std::vector<AttrId> ids() const;
  AttrId first() const;  // requires !empty()

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        int b = __builtin_ctzll(bits);
        f(static_cast<AttrId>(w * 64 + b));
        bits &= bits - 1;
      }
    }
  }

  bool operator==(const AttrSet& o) const noexcept = default;
  std::strong_ordering operator<=>(const AttrSet& o) const noexcept;
  std::size_t hash() const noexcept;

 private:
  void trim();
  std::vector<std::uint64_t> words_;
};

struct AttrSetHash {
  std::size_t operator()(const AttrSet& s) const noexcept { return s.hash(); }
};

// Symbol table for attribute names. Ids 0..2 are the reserved attributes
// phi, upsilon and tid; user attributes follow in declaration order.
class Catalog {
 public:
  static constexpr AttrId kPhi = 0;
  static constexpr AttrId kUpsilon = 1;
  static constexpr AttrId kTid = 2;

  Catalog();

  AttrId intern(std::string_view name);
  std::optional<AttrId> find(std::string_view name) const;
  AttrId at(std::string_view name) const;  // throws Domain on unknown names
  const std::string& name(AttrId id) const;
  AttrKind kind(AttrId id) const;
  std::size_t size() const noexcept { return names_.size(); }

  std::string format(const AttrSet& s) const;
  AttrSet parse(std::string_view space_separated) const;
  std::vector<std::string> names_of(const AttrSet& s) const;

  static bool valid_name(std::string_view name);
  static std::string canonical_name(std::string_view name);  // maps φ/υ aliases

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, AttrId> index_;
};

using CatalogPtr = std::shared_ptr<const Catalog>;

}  // namespace hypc
