// SPDX-License-Identifier: Apache-2.0
#include "fd/attribute.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "common/error.hpp"

namespace hypc {

AttrSet::AttrSet(std::initializer_list<AttrId> ids) {
  for (AttrId a : ids) insert(a);
}

AttrSet::AttrSet(const std::vector<AttrId>& ids) {
  for (AttrId a : ids) insert(a);
}

std::size_t AttrSet::size() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool AttrSet::contains(AttrId a) const noexcept {
  std::size_t w = a / 64;
  return w < words_.size() && ((words_[w] >> (a % 64)) & 1u);
}

void AttrSet::insert(AttrId a) {
  std::size_t w = a / 64;
  if (w >= words_.size()) words_.resize(w + 1, 0);
  words_[w] |= std::uint64_t{1} << (a % 64);
}

void AttrSet::erase(AttrId a) {
  std::size_t w = a / 64;
  if (w >= words_.size()) return;
  words_[w] &= ~(std::uint64_t{1} << (a % 64));
  trim();
}

AttrSet& AttrSet::operator|=(const AttrSet& o) {
  if (o.words_.size() > words_.size()) words_.resize(o.words_.size(), 0);
  for (std::size_t i = 0; i < o.words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

AttrSet& AttrSet::operator&=(const AttrSet& o) {
  if (words_.size() > o.words_.size()) words_.resize(o.words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  trim();
  return *this;
}

AttrSet& AttrSet::operator-=(const AttrSet& o) {
  std::size_t n = std::min(words_.size(), o.words_.size());
  for (std::size_t i = 0; i < n; ++i) words_[i] &= ~o.words_[i];
  trim();
  return *this;
}

bool AttrSet::subset_of(const AttrSet& o) const noexcept {
  if (words_.size() > o.words_.size()) return false;
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

bool AttrSet::intersects(const AttrSet& o) const noexcept {
  std::size_t n = std::min(words_.size(), o.words_.size());
  for (std::size_t i = 0; i < n; ++i)
    if (words_[i] & o.words_[i]) return true;
  return false;
}

std::vector<AttrId> AttrSet::ids() const {
  std::vector<AttrId> out;
  out.reserve(size());
  for_each([&](AttrId a) { out.push_back(a); });
  return out;
}

AttrId AttrSet::first() const {
  for (std::size_t w = 0; w < words_.size(); ++w)
    if (words_[w]) return static_cast<AttrId>(w * 64 + __builtin_ctzll(words_[w]));
  fail(ErrorKind::Domain, "first() on empty attribute set");
}

std::strong_ordering AttrSet::operator<=>(const AttrSet& o) const noexcept {
  // Lexicographic on the ascending id sequence.
  auto a = ids();
  auto b = o.ids();
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
}

std::size_t AttrSet::hash() const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (auto w : words_) {
    h ^= std::hash<std::uint64_t>{}(w);
    h *= 1099511628211ull;
  }
  return h;
}

void AttrSet::trim() {
  while (!words_.empty() && words_.back() == 0) words_.pop_back();
}

Catalog::Catalog() {
  intern("phi");
  intern("upsilon");
  intern("tid");
}

std::string Catalog::canonical_name(std::string_view name) {
  if (name == "φ") return "phi";
  if (name == "υ") return "upsilon";
  return std::string(name);
}

bool Catalog::valid_name(std::string_view name) {
  if (name.empty()) return false;
  if (name.find("->") != std::string_view::npos) return false;
  for (unsigned char c : name) {
    if (c <= 0x20 || c == 0x7f) return false;
    if (c == ',' || c == '#' || c == '(' || c == ')' || c == '"') return false;
  }
  return true;
}

AttrId Catalog::intern(std::string_view raw) {
  std::string name = canonical_name(raw);
  if (!valid_name(name)) fail(ErrorKind::Parse, "invalid attribute name '" + name + "'");
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  auto id = static_cast<AttrId>(names_.size());
  names_.push_back(name);
  index_.emplace(std::move(name), id);
  return id;
}

std::optional<AttrId> Catalog::find(std::string_view raw) const {
  auto it = index_.find(canonical_name(raw));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

AttrId Catalog::at(std::string_view name) const {
  auto id = find(name);
  if (!id) fail(ErrorKind::Domain, "unknown attribute '" + std::string(name) + "'");
  return *id;
}

const std::string& Catalog::name(AttrId id) const {
  if (id >= names_.size()) fail(ErrorKind::Domain, "attribute id out of range");
  return names_[id];
}

AttrKind Catalog::kind(AttrId id) const {
  switch (id) {
    case kPhi: return AttrKind::Phenomenon;
    case kUpsilon: return AttrKind::Hypothesis;
    case kTid: return AttrKind::Trial;
    default: return AttrKind::User;
  }
}

std::string Catalog::format(const AttrSet& s) const {
  std::string out;
  s.for_each([&](AttrId a) {
    if (!out.empty()) out += ' ';
    out += name(a);
  });
  return out;
}

std::vector<std::string> Catalog::names_of(const AttrSet& s) const {
  std::vector<std::string> out;
  s.for_each([&](AttrId a) { out.push_back(name(a)); });
  return out;
}

AttrSet Catalog::parse(std::string_view text) const {
  AttrSet out;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) out.insert(at(tok));
  return out;
}

}  // namespace hypc
