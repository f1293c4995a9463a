// SPDX-License-Identifier: Apache-2.0
#include "fd/reasoning.hpp"

#include <map>

#include "common/error.hpp"

namespace hypc {

namespace detail {

AttrSet xclosure_simple(const FDSet& sigma, const AttrSet& x) {
  AttrSet plus = x;
  std::vector<const FD*> rest;
  rest.reserve(sigma.size());
  for (auto& fd : sigma) rest.push_back(&fd);
  std::size_t size = 0;
  while (size < plus.size()) {
    size = plus.size();
    std::vector<const FD*> keep;
    for (const FD* fd : rest) {
      if (fd->lhs.subset_of(plus)) {
        plus |= fd->rhs;
      } else {
        keep.push_back(fd);
      }
    }
    rest.swap(keep);
  }
  return plus;
}

AttrSet xclosure_linear(const FDSet& sigma, const AttrSet& x) { return closure_skipping(sigma, x, sigma.size()); }

AttrSet closure_skipping(const FDSet& sigma, const AttrSet& x, std::size_t skip) {
  const auto& fds = sigma.fds();
  std::vector<std::size_t> missing(fds.size());
  std::vector<std::vector<std::size_t>> waiting(sigma.cat().size());
  for (std::size_t i = 0; i < fds.size(); ++i) {
    if (i == skip) continue;
    missing[i] = fds[i].lhs.size();
    fds[i].lhs.for_each([&](AttrId a) { waiting[a].push_back(i); });
  }
  AttrSet plus;
  std::vector<AttrId> queue;
  auto reach = [&](AttrId a) {
    if (plus.contains(a)) return;
    plus.insert(a);
    queue.push_back(a);
  };
  x.for_each(reach);
  while (!queue.empty()) {
    AttrId a = queue.back();
    queue.pop_back();
    for (std::size_t i : waiting[a])
      if (--missing[i] == 0) fds[i].rhs.for_each(reach);
  }
  return plus;
}

AttrSet closure_unchecked(const FDSet& sigma, const AttrSet& x) {
  if (x.empty()) return x;
  return sigma.size() > 32 ? xclosure_linear(sigma, x) : xclosure_simple(sigma, x);
}

}  // namespace detail

AttrSet xclosure(const FDSet& sigma, const AttrSet& x) {
  if (x.empty()) fail(ErrorKind::Domain, "closure of the empty attribute set");
  if (!x.subset_of(sigma.universe()))
    fail(ErrorKind::Domain, "attributes outside the universe: " + sigma.cat().format(x - sigma.universe()));
  return detail::closure_unchecked(sigma, x);
}

bool member(const FDSet& sigma, const FD& fd) {
  if (!fd.attrs().subset_of(sigma.universe()))
    fail(ErrorKind::Domain,
         "attributes outside the universe: " + sigma.cat().format(fd.attrs() - sigma.universe()));
  if (fd.rhs.subset_of(fd.lhs)) return true;
  return fd.rhs.subset_of(detail::closure_unchecked(sigma, fd.lhs));
}

FDSet left_reduce(const FDSet& sigma) {
  std::vector<FD> work(sigma.fds());
  FDSet current(sigma.catalog(), sigma.universe());
  auto rebuild = [&] {
    FDSet s(sigma.catalog(), sigma.universe());
    for (auto& fd : work) s.add(fd);
    return s;
  };
  current = rebuild();
  for (auto& fd : work) {
    for (AttrId a : fd.lhs.ids()) {
      if (fd.lhs.size() <= 1) break;
      FD cand{fd.lhs - AttrSet{a}, fd.rhs};
      if (member(current, cand)) {
        fd = cand;
        current = rebuild();
      }
    }
  }
  return current;
}

FDSet union_rule(const FDSet& sigma) {
  std::vector<FD> merged;
  std::map<AttrSet, std::size_t> pos;
  for (auto& fd : sigma) {
    auto [it, fresh] = pos.emplace(fd.lhs, merged.size());
    if (fresh) {
      merged.push_back(fd);
    } else {
      merged[it->second].rhs |= fd.rhs;
    }
  }
  FDSet out(sigma.catalog(), sigma.universe());
  for (auto& fd : merged) out.add(fd);
  return out;
}

FDSet decompose(const FDSet& sigma) {
  FDSet out(sigma.catalog(), sigma.universe());
  for (auto& fd : sigma) fd.rhs.for_each([&](AttrId a) { out.add(FD{fd.lhs, AttrSet{a}}); });
  return out;
}

bool equivalent(const FDSet& a, const FDSet& b) {
  for (auto& fd : a)
    if (!member(b, fd)) return false;
  for (auto& fd : b)
    if (!member(a, fd)) return false;
  return true;
}

std::string CanonicalReport::describe(const FDSet& sigma) const {
  std::string what;
  switch (clause) {
    case Clause::None: return "ok";
    case Clause::SingletonRhs: what = "right-hand side is not a single attribute"; break;
    case Clause::NonRedundant: what = "redundant FD"; break;
    case Clause::LeftReduced: what = "left-hand side is not reduced"; break;
    case Clause::UniqueLhs: what = "attribute has more than one determinant"; break;
  }
  if (witness) what += ": " + sigma.format(*witness);
  return what;
}

CanonicalReport check_canonical(const FDSet& sigma) {
  using C = CanonicalReport::Clause;
  for (auto& fd : sigma)
    if (fd.rhs.size() != 1) return {C::SingletonRhs, fd};

  const auto& fds = sigma.fds();
  for (std::size_t i = 0; i < fds.size(); ++i)
    if (fds[i].rhs.subset_of(detail::closure_skipping(sigma, fds[i].lhs, i))) return {C::NonRedundant, fds[i]};

  for (auto& fd : sigma) {
    if (fd.lhs.size() <= 1) continue;
    for (AttrId a : fd.lhs.ids())
      if (member(sigma, FD{fd.lhs - AttrSet{a}, fd.rhs})) return {C::LeftReduced, fd};
  }
  return {};
}

CanonicalReport check_parsimonious(const FDSet& sigma) {
  auto rep = check_canonical(sigma);
  if (!rep.ok()) return rep;
  AttrSet seen;
  for (auto& fd : sigma) {
    if (seen.intersects(fd.rhs)) return {CanonicalReport::Clause::UniqueLhs, fd};
    seen |= fd.rhs;
  }
  return {};
}

FDSet closure_oracle(const FDSet& sigma, std::size_t cap) {
  auto attrs = sigma.universe().ids();
  const std::size_t n = attrs.size();
  if (n > cap)
    fail(ErrorKind::Capacity, "closure oracle limited to " + std::to_string(cap) + " attributes, got " +
                                  std::to_string(n));
  std::map<AttrId, unsigned> bit;
  for (std::size_t i = 0; i < n; ++i) bit[attrs[i]] = static_cast<unsigned>(i);
  auto mask_of = [&](const AttrSet& s) {
    std::uint32_t m = 0;
    s.for_each([&](AttrId a) { m |= 1u << bit.at(a); });
    return m;
  };

  // derived[X] is the largest Y with X -> Y derived so far.
  if (n > 20) fail(ErrorKind::Capacity, "closure oracle cannot enumerate more than 20 attributes");
  const std::uint32_t full = 1u << n;
  std::vector<std::uint32_t> derived(full);
  for (std::uint32_t x = 0; x < full; ++x) derived[x] = x;  // reflexivity
  for (auto& fd : sigma) derived[mask_of(fd.lhs)] |= mask_of(fd.rhs);

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::uint32_t x = 0; x < full; ++x) {
      // augmentation: X -> Y gives XA -> YA
      for (unsigned a = 0; a < n; ++a) {
        std::uint32_t xa = x | (1u << a);
        std::uint32_t want = derived[xa] | derived[x] | (1u << a);
        if (want != derived[xa]) {
          derived[xa] = want;
          changed = true;
        }
      }
      // transitivity: X -> Y and Y -> Z give X -> Z
      std::uint32_t via = derived[derived[x]];
      if ((derived[x] | via) != derived[x]) {
        derived[x] |= via;
        changed = true;
      }
    }
  }

  FDSet out(sigma.catalog(), sigma.universe());
  for (std::uint32_t x = 1; x < full; ++x) {
    AttrSet lhs;
    for (unsigned i = 0; i < n; ++i)
      if (x & (1u << i)) lhs.insert(attrs[i]);
    for (unsigned i = 0; i < n; ++i)
      if ((derived[x] & (1u << i)) && !(x & (1u << i))) out.add(FD{lhs, AttrSet{attrs[i]}});
  }
  return out;
}

}  // namespace hypc
