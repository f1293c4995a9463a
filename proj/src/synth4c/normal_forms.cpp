// SPDX-License-Identifier: Apache-2.0
#include "synth4c/normal_forms.hpp"

#include <algorithm>
#include <map>

#include "common/error.hpp"
#include "fd/reasoning.hpp"

namespace hypc {

namespace {

void require_cap(const RelScheme& s, std::size_t cap, const char* what) {
  if (s.attrs.size() > cap)
    fail(ErrorKind::Capacity, std::string(what) + " limited to " + std::to_string(cap) + " attributes per scheme; " +
                                  s.name + " has " + std::to_string(s.attrs.size()));
}

// Calls f for every non-empty subset of attrs, smallest first.
template <class F>
void for_each_subset(const AttrSet& attrs, F&& f) {
  auto ids = attrs.ids();
  const std::uint32_t full = 1u << ids.size();
  std::vector<std::uint32_t> masks;
  masks.reserve(full);
  for (std::uint32_t m = 1; m < full; ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(),
                   [](std::uint32_t a, std::uint32_t b) { return __builtin_popcount(a) < __builtin_popcount(b); });
  for (std::uint32_t m : masks) {
    AttrSet x;
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (m & (1u << i)) x.insert(ids[i]);
    if (!f(x)) return;
  }
}

AttrSet closure(const FDSet& sigma, const AttrSet& x) { return detail::closure_unchecked(sigma, x); }

}  // namespace

std::string Verdict::describe(const Schema& schema) const {
  if (ok) return "ok";
  std::string out = "violation";
  if (scheme) out += " in " + schema.schemes[*scheme].name;
  if (witness) out += ": " + schema.source.cat().format(witness->lhs) + " -> " + schema.source.cat().format(witness->rhs);
  return out;
}

namespace detail {

Verdict bcnf_shortcut(const Schema& schema, const FDSet& sigma) {
  for (std::size_t i = 0; i < schema.schemes.size(); ++i) {
    const auto& r = schema.schemes[i];
    for (auto& fd : sigma) {
      if (fd.trivial() || !fd.attrs().subset_of(r.attrs)) continue;
      if (!r.attrs.subset_of(closure(sigma, fd.lhs))) return {false, i, fd};
    }
  }
  return {};
}

Verdict bcnf_exhaustive(const Schema& schema, const FDSet& sigma, std::size_t cap) {
  for (std::size_t i = 0; i < schema.schemes.size(); ++i) {
    const auto& r = schema.schemes[i];
    require_cap(r, cap, "BCNF check");
    Verdict v;
    for_each_subset(r.attrs, [&](const AttrSet& x) {
      AttrSet plus = closure(sigma, x);
      AttrSet gained = (plus & r.attrs) - x;
      if (!gained.empty() && !r.attrs.subset_of(plus)) {
        v = {false, i, FD{x, AttrSet{gained.first()}}};
        return false;
      }
      return true;
    });
    if (!v.ok) return v;
  }
  return {};
}

}  // namespace detail

Verdict is_bcnf(const Schema& schema, const FDSet& sigma, std::size_t cap) {
  if (is_canonical(sigma)) return detail::bcnf_shortcut(schema, sigma);
  return detail::bcnf_exhaustive(schema, sigma, cap);
}

std::vector<AttrSet> candidate_keys(const FDSet& sigma, const AttrSet& attrs, std::size_t cap) {
  if (attrs.size() > cap)
    fail(ErrorKind::Capacity, "key enumeration limited to " + std::to_string(cap) + " attributes");
  std::vector<AttrSet> keys;
  for_each_subset(attrs, [&](const AttrSet& x) {
    for (auto& k : keys)
      if (k.subset_of(x)) return true;
    if (attrs.subset_of(closure(sigma, x))) keys.push_back(x);
    return true;
  });
  return keys;
}

Verdict is_3nf(const Schema& schema, const FDSet& sigma, std::size_t cap) {
  for (std::size_t i = 0; i < schema.schemes.size(); ++i) {
    const auto& r = schema.schemes[i];
    require_cap(r, cap, "3NF check");
    AttrSet prime;
    for (auto& k : candidate_keys(sigma, r.attrs, cap)) prime |= k;

    // sigma's own FDs first so witnesses read like the input
    for (auto& fd : sigma) {
      if (fd.trivial() || !fd.attrs().subset_of(r.attrs)) continue;
      if (r.attrs.subset_of(closure(sigma, fd.lhs))) continue;
      if (!(fd.rhs - fd.lhs).subset_of(prime)) return {false, i, fd};
    }
    Verdict v;
    for_each_subset(r.attrs, [&](const AttrSet& x) {
      AttrSet plus = closure(sigma, x);
      if (r.attrs.subset_of(plus)) return true;
      AttrSet bad = ((plus & r.attrs) - x) - prime;
      if (!bad.empty()) {
        v = {false, i, FD{x, AttrSet{bad.first()}}};
        return false;
      }
      return true;
    });
    if (!v.ok) return v;
  }
  return {};
}

bool preserves(const Schema& schema, const FDSet& sigma) {
  for (auto& fd : sigma) {
    AttrSet z = fd.lhs;
    bool grew = true;
    while (grew && !fd.rhs.subset_of(z)) {
      grew = false;
      for (auto& r : schema.schemes) {
        AttrSet inside = z & r.attrs;
        if (inside.empty()) continue;
        AttrSet add = (closure(sigma, inside) & r.attrs) - z;
        if (!add.empty()) {
          z |= add;
          grew = true;
        }
      }
    }
    if (!fd.rhs.subset_of(z)) return false;
  }
  return true;
}

std::optional<bool> preserves_by_projection(const Schema& schema, const FDSet& sigma, std::size_t cap) {
  FDSet projected(sigma.catalog(), sigma.universe() | schema.attrs());
  for (auto& r : schema.schemes) {
    if (r.attrs.size() > cap) return std::nullopt;
    for_each_subset(r.attrs, [&](const AttrSet& x) {
      AttrSet y = (closure(sigma, x) & r.attrs) - x;
      if (!y.empty()) projected.add(FD{x, y});
      return true;
    });
  }
  for (auto& fd : sigma)
    if (!member(projected, fd)) return false;
  return true;
}

bool lossless_join(const Schema& schema, const FDSet& sigma) {
  if (!preserves(schema, sigma)) fail(ErrorKind::Precondition, "lossless test needs a schema that preserves the FD set");
  AttrSet u = schema.attrs();
  return std::any_of(schema.schemes.begin(), schema.schemes.end(),
                     [&](const RelScheme& r) { return u.subset_of(closure(sigma, r.attrs)); });
}

bool detail::lossless_by_key_containment(const Schema& schema, const FDSet& sigma) {
  if (schema.schemes.size() <= 1) return true;
  AttrSet u = schema.attrs();
  for (std::size_t i = 0; i < schema.schemes.size(); ++i) {
    const AttrSet& x = schema.schemes[i].key;
    if (u.subset_of(closure(sigma, x))) continue;
    bool inside_other = false;
    for (std::size_t j = 0; j < schema.schemes.size(); ++j)
      if (j != i && x.proper_subset_of(schema.schemes[j].key)) inside_other = true;
    if (!inside_other) return false;
  }
  return true;
}

bool chase_oracle(const Schema& schema, const FDSet& sigma, std::size_t cap) {
  auto cols = schema.attrs().ids();
  if (cols.size() > cap)
    fail(ErrorKind::Capacity, "chase limited to " + std::to_string(cap) + " attributes, got " + std::to_string(cols.size()));
  std::map<AttrId, std::size_t> col_of;
  for (std::size_t c = 0; c < cols.size(); ++c) col_of[cols[c]] = c;

  // Symbol 0 is the distinguished value; every other cell starts unique.
  const std::size_t rows = schema.schemes.size();
  std::vector<std::vector<std::size_t>> t(rows, std::vector<std::size_t>(cols.size()));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < cols.size(); ++c)
      t[i][c] = schema.schemes[i].attrs.contains(cols[c]) ? 0 : 1 + i * cols.size() + c;

  std::vector<std::pair<std::vector<std::size_t>, std::size_t>> rules;
  for (auto& fd : sigma) {
    if (!fd.attrs().subset_of(schema.attrs())) continue;
    std::vector<std::size_t> lhs;
    fd.lhs.for_each([&](AttrId a) { lhs.push_back(col_of.at(a)); });
    fd.rhs.for_each([&](AttrId a) {
      if (!fd.lhs.contains(a)) rules.emplace_back(lhs, col_of.at(a));
    });
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [lhs, c] : rules) {
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = i + 1; j < rows; ++j) {
          bool agree = std::all_of(lhs.begin(), lhs.end(), [&](std::size_t l) { return t[i][l] == t[j][l]; });
          if (!agree || t[i][c] == t[j][c]) continue;
          std::size_t keep = std::min(t[i][c], t[j][c]);
          std::size_t drop = std::max(t[i][c], t[j][c]);
          for (auto& row : t)
            if (row[c] == drop) row[c] = keep;
          changed = true;
        }
    }
  }
  return std::any_of(t.begin(), t.end(), [](const auto& row) {
    return std::all_of(row.begin(), row.end(), [](std::size_t v) { return v == 0; });
  });
}

}  // namespace hypc
