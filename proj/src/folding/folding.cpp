// SPDX-License-Identifier: Apache-2.0
#include "folding/folding.hpp"

#include <algorithm>
#include <map>

#include "common/error.hpp"
#include "common/graph.hpp"
#include "fd/reasoning.hpp"

namespace hypc {

namespace {

void require_parsimonious(const FDSet& sigma) {
  auto rep = check_parsimonious(sigma);
  if (!rep.ok()) fail(ErrorKind::Precondition, "FD set is not parsimonious: " + rep.describe(sigma));
}

}  // namespace

namespace detail {

FoldingIndex::FoldingIndex(const FDSet& sigma) : fd_of(sigma.cat().size(), -1) {
  const auto& fds = sigma.fds();
  std::vector<std::vector<std::size_t>> parents(sigma.cat().size());
  for (std::size_t i = 0; i < fds.size(); ++i) {
    AttrId b = fds[i].rhs.first();
    fd_of[b] = static_cast<std::ptrdiff_t>(i);
    fds[i].lhs.for_each([&](AttrId y) { parents[b].push_back(y); });
  }
  std::size_t count = 0;
  component = strong_components(parents, &count);
  members.resize(count);
  for (std::size_t x = 0; x < component.size(); ++x) members[component[x]].push_back(static_cast<AttrId>(x));
}

AttrSet afolding_walk(const FDSet& sigma, const FoldingIndex& index, AttrId a, FoldingTrace* trace,
                      std::vector<AttrId>* order) {
  if (a >= index.fd_of.size() || index.fd_of[a] < 0)
    fail(ErrorKind::Domain, "no FD determines '" + sigma.cat().name(a) + "'");
  const auto& fds = sigma.fds();
  const std::size_t n_attr = index.fd_of.size();
  std::vector<char> reached(n_attr, 0), entered(index.members.size(), 0);
  std::vector<AttrId> seen{a}, layer{a}, next;
  AttrSet replaced;
  reached[a] = 1;
  while (!layer.empty()) {
    std::sort(layer.begin(), layer.end());
    next.clear();
    for (AttrId b : layer) {
      if (index.fd_of[b] < 0) continue;
      const FD& f = fds[static_cast<std::size_t>(index.fd_of[b])];
      std::size_t c = index.component[b];
      if (!entered[c]) {
        entered[c] = 1;
        replaced.insert(b);
        if (trace) trace->consumed.push_back(f);
      }
      // Kept cycle members still pull in their determinants, so the walk
      // covers everything b depends on.
      f.lhs.for_each([&](AttrId y) {
        if (reached[y]) return;
        reached[y] = 1;
        seen.push_back(y);
        next.push_back(y);
      });
    }
    layer.swap(next);
  }
  AttrSet kept;
  for (AttrId x : seen)
    if (!replaced.contains(x)) kept.insert(x);
  if (trace) trace->lambda |= replaced;
  if (order) *order = std::move(seen);
  return kept;
}

AttrSet afolding_scan(const FDSet& sigma, AttrId a, FoldingTrace* trace) {
  const auto& fds = sigma.fds();
  const std::size_t n_attr = sigma.cat().size();
  std::vector<std::vector<AttrId>> lhs(fds.size());
  std::vector<AttrId> rhs(fds.size());
  bool found = false;
  for (std::size_t i = 0; i < fds.size(); ++i) {
    lhs[i] = fds[i].lhs.ids();
    rhs[i] = fds[i].rhs.first();
    if (rhs[i] == a) found = true;
  }
  if (!found) fail(ErrorKind::Domain, "no FD determines '" + sigma.cat().name(a) + "'");

  std::vector<char> in_star(n_attr, 0), in_lambda(n_attr, 0);
  std::vector<AttrId> star{a};
  in_star[a] = 1;
  std::vector<std::size_t> remaining(fds.size());
  for (std::size_t i = 0; i < fds.size(); ++i) remaining[i] = i;

  std::size_t size = 0;
  while (size < star.size()) {
    size = star.size();
    std::vector<std::size_t> keep;
    keep.reserve(remaining.size());
    for (std::size_t i : remaining) {
      if (!in_star[rhs[i]]) {
        keep.push_back(i);
        continue;
      }
      if (trace) trace->consumed.push_back(fds[i]);
      bool cyclic = false;
      for (AttrId y : lhs[i]) {
        if (in_lambda[y]) cyclic = true;
        if (!in_star[y]) {
          in_star[y] = 1;
          star.push_back(y);
        }
      }
      if (!cyclic) in_lambda[rhs[i]] = 1;
    }
    remaining.swap(keep);
  }

  AttrSet out;
  for (AttrId x : star) {
    if (in_lambda[x]) {
      if (trace) trace->lambda.insert(x);
    } else {
      out.insert(x);
    }
  }
  return out;
}

}  // namespace detail

namespace {

// Cycle-aware folding of a whole FD set; see the header for the rules.
class Folder {
 public:
  explicit Folder(const FDSet& sigma) : sigma_(sigma), index_(sigma), cycles_(index_.members.size()) {}

  const detail::FoldingIndex& index() const { return index_; }

  FoldingResult run() {
    const auto& fds = sigma_.fds();
    std::vector<Target> targets(fds.size());
    std::vector<AttrSet> folds(fds.size());
    FDSet gamma(sigma_.catalog(), sigma_.universe());
    std::map<AttrSet, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < fds.size(); ++i) {
      Target& t = targets[i];
      t.attr = fds[i].rhs.first();
      t.kept = detail::afolding_walk(sigma_, index_, t.attr, &t.trace, &t.order);
      for (AttrId x : t.order) {
        t.anc.insert(x);
        if (index_.cyclic(x)) t.cyclic = true;
      }
      if (!t.cyclic) {
        folds[i] = t.kept;
        gamma.add(FD{folds[i], fds[i].rhs});
        continue;
      }
      t.cls = detail::closure_unchecked(sigma_, t.anc);
      groups[t.cls].push_back(i);
    }

    // Smaller classes first: a class only depends on classes strictly inside it.
    std::vector<const std::pair<const AttrSet, std::vector<std::size_t>>*> order;
    for (auto& g : groups) order.push_back(&g);
    std::stable_sort(order.begin(), order.end(),
                     [](auto* l, auto* r) { return l->first.size() < r->first.size(); });
    for (auto* g : order) {
      FDSet trial = gamma;
      for (std::size_t i : g->second) {
        folds[i] = entry(targets[i]);
        trial.add(FD{folds[i], fds[i].rhs});
      }
      if (!consistent(trial, g->second, folds, targets)) {
        trial = gamma;
        for (std::size_t i : g->second) {
          folds[i] = canonical(targets[i]);
          trial.add(FD{folds[i], fds[i].rhs});
        }
      }
      gamma = std::move(trial);
    }

    FoldingResult out{FDSet(sigma_.catalog(), sigma_.universe()), {}};
    for (std::size_t i = 0; i < fds.size(); ++i) {
      out.folded.add(FD{folds[i], fds[i].rhs});
      out.trace.push_back(std::move(targets[i].trace));
    }
    return out;
  }

 private:
  struct Target {
    AttrId attr = 0;
    AttrSet kept, anc, cls;
    std::vector<AttrId> order;
    FoldingTrace trace;
    bool cyclic = false;
  };

  struct Cycle {
    bool ready = false;
    AttrSet members, anc, cls, seed, key;
  };

  AttrSet sources(const AttrSet& attrs) const {
    AttrSet out;
    attrs.for_each([&](AttrId x) {
      if (index_.fd_of[x] < 0) out.insert(x);
    });
    return out;
  }

  // Sources plus the seed of every cycle inside attrs.
  AttrSet seeded_key(const AttrSet& attrs) {
    AttrSet out = sources(attrs);
    attrs.for_each([&](AttrId x) {
      if (index_.cyclic(x)) out |= cycle(index_.component[x]).seed;
    });
    return out;
  }

  const Cycle& cycle(std::size_t c) {
    Cycle& cy = cycles_[c];
    if (cy.ready) return cy;
    for (AttrId m : index_.members[c]) cy.members.insert(m);
    cy.anc = ancestry(sigma_, index_.members[c].front());
    cy.cls = detail::closure_unchecked(sigma_, cy.anc);
    // Minimal members that, with everything upstream, determine the cycle.
    AttrSet up = cy.anc - cy.members;
    cy.seed = cy.members;
    auto ids = cy.members.ids();
    for (auto it = ids.rbegin(); it != ids.rend(); ++it) {
      AttrSet fewer = cy.seed;
      fewer.erase(*it);
      if (cy.members.subset_of(detail::closure_unchecked(sigma_, fewer | up))) cy.seed = fewer;
    }
    cy.ready = true;
    cy.key = seeded_key(cy.anc);
    return cycles_[c];
  }

  // The walk's choice, with cycles of other classes reduced to their seeds,
  // then trimmed to a minimal key of the ancestry (farthest attributes first).
  AttrSet entry(const Target& t) {
    AttrSet z = t.kept;
    std::size_t own = index_.component[t.attr];
    std::vector<char> done(index_.members.size(), 0);
    for (AttrId x : t.order) {
      std::size_t c = index_.component[x];
      if (c == own || !index_.cyclic(x) || done[c]) continue;
      done[c] = 1;
      const Cycle& cy = cycle(c);
      if (cy.cls == t.cls) continue;
      z = (z - cy.members) | cy.seed;
    }
    for (auto it = t.order.rbegin(); it != t.order.rend(); ++it) {
      if (!z.contains(*it)) continue;
      AttrSet fewer = z;
      fewer.erase(*it);
      if (!fewer.empty() && t.anc.subset_of(detail::closure_unchecked(sigma_, fewer))) z = fewer;
    }
    return z;
  }

  // Seed members fold onto the rest of the key plus the fewest other members
  // that derive them; every other attribute folds onto the seeded key.
  AttrSet canonical(const Target& t) {
    if (!index_.cyclic(t.attr)) return seeded_key(t.anc - AttrSet{t.attr});
    const Cycle& cy = cycle(index_.component[t.attr]);
    if (!cy.seed.contains(t.attr)) return cy.key;
    AttrSet base = cy.key - AttrSet{t.attr};
    AttrSet extra = cy.members - cy.seed;
    auto ids = extra.ids();
    for (auto it = ids.rbegin(); it != ids.rend(); ++it) {
      AttrSet fewer = extra;
      fewer.erase(*it);
      if (detail::closure_unchecked(sigma_, base | fewer).contains(t.attr)) extra = fewer;
    }
    return base | extra;
  }

  // Keys of one class must stay equivalent, and reduced, under the folded set.
  static bool consistent(const FDSet& trial, const std::vector<std::size_t>& group,
                         const std::vector<AttrSet>& folds, const std::vector<Target>& targets) {
    const AttrSet& hub = folds[group.front()];
    AttrSet hub_plus = detail::closure_unchecked(trial, hub);
    for (std::size_t i : group) {
      if (!folds[i].subset_of(hub_plus)) return false;
      if (!hub.subset_of(detail::closure_unchecked(trial, folds[i]))) return false;
      for (AttrId x : folds[i].ids()) {
        AttrSet fewer = folds[i];
        fewer.erase(x);
        if (!fewer.empty() && detail::closure_unchecked(trial, fewer).contains(targets[i].attr)) return false;
      }
    }
    return true;
  }

  const FDSet& sigma_;
  detail::FoldingIndex index_;
  std::vector<Cycle> cycles_;
};

}  // namespace

AttrSet ancestry(const FDSet& sigma, AttrId a) {
  std::vector<std::vector<AttrId>> parents(sigma.cat().size());
  for (auto& f : sigma)
    f.rhs.for_each([&](AttrId b) { f.lhs.for_each([&](AttrId y) { parents[b].push_back(y); }); });
  AttrSet seen{a};
  std::vector<AttrId> stack{a};
  while (!stack.empty()) {
    AttrId b = stack.back();
    stack.pop_back();
    if (b >= parents.size()) continue;
    for (AttrId y : parents[b])
      if (!seen.contains(y)) {
        seen.insert(y);
        stack.push_back(y);
      }
  }
  return seen;
}

AttrSet afolding(const FDSet& sigma, AttrId a, FoldingTrace* trace) {
  require_parsimonious(sigma);
  detail::FoldingIndex index(sigma);
  std::vector<AttrId> order;
  FoldingTrace walk;
  AttrSet kept = detail::afolding_walk(sigma, index, a, &walk, &order);
  if (trace) *trace = walk;
  if (std::none_of(order.begin(), order.end(), [&](AttrId x) { return index.cyclic(x); })) return kept;
  auto r = Folder(sigma).run();
  for (auto& f : r.folded)
    if (f.rhs.contains(a)) return f.lhs;
  return kept;
}

FoldingResult folding(const FDSet& sigma) {
  require_parsimonious(sigma);
  return Folder(sigma).run();
}

bool is_folded(const FDSet& sigma, const FD& fd, std::size_t cap) {
  if (!fd.attrs().subset_of(sigma.universe())) fail(ErrorKind::Domain, "FD mentions attributes outside the universe");
  if (fd.trivial()) return false;
  AttrSet scope = fd.lhs;
  fd.rhs.for_each([&](AttrId b) { scope |= ancestry(sigma, b); });
  auto attrs = scope.ids();
  if (attrs.size() > cap)
    fail(ErrorKind::Capacity, "folded check limited to " + std::to_string(cap) + " attributes, got " +
                                  std::to_string(attrs.size()));
  const AttrSet& x = fd.lhs;
  AttrSet x_plus = xclosure(sigma, x);
  const std::uint32_t full = 1u << attrs.size();
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    AttrSet y;
    for (std::size_t i = 0; i < attrs.size(); ++i)
      if (mask & (1u << i)) y.insert(attrs[i]);
    if (x.subset_of(y)) continue;
    bool y_gives_x = x.subset_of(xclosure(sigma, y));
    bool x_gives_y = y.subset_of(x_plus);
    if (y_gives_x && !x_gives_y) return false;
  }
  return true;
}

}  // namespace hypc
