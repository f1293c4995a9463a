// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "fd/fdset.hpp"
#include "urel/urel.hpp"

namespace hypc {

// Y0[V0 D0 | phi upsilon]: repair-key on phi weighted by Conf, one variable
// per phenomenon.
URelation build_explanation(const Relation& h0, WorldTable& w);

struct LearnOptions {
  // 0 compares canonical decimal strings exactly. A positive value buckets
  // numbers by round(v / epsilon) before the instance FD test.
  double epsilon = 0;
};

// Learned u-factors of one exogenous relation.
struct UFactorGroups {
  std::vector<AttrSet> groups;  // disjoint, ordered by pivot
  std::vector<AttrId> pivots;   // lowest attribute of each group
  FDSet gamma;                  // pivot -> B for group members, then sigma_k's upsilon-fds
};

// Groups the non-key columns of h (all but phi and tid) by mutual instance
// FDs B <-> C, closed transitively. Precondition error on an empty relation,
// domain error for columns sigma_k does not know.
UFactorGroups learn_u_factors(const Relation& h, const FDSet& sigma_k, const LearnOptions& opts = {});

// Gamma over several exogenous relations: every relation's pivot FDs, then
// sigma_k's upsilon-fds once.
FDSet combine_gamma(const FDSet& sigma_k, const std::vector<UFactorGroups>& learned);

// One u-factor projection [V D | phi A_p]: group by (phi, A_p) with counts,
// repair-key on phi weighted by the count.
URelation u_factor(const Relation& h, const std::string& pivot, WorldTable& w);

// U-factor projections of each exogenous relation.
struct ProjectionMap {
  struct Entry {
    std::size_t relation;  // index into the exogenous relations
    std::string pivot;
    std::size_t projection;  // index into the produced U-relations
  };
  std::vector<Entry> entries;
};

struct Hypothesis {
  std::string upsilon;  // the hypothesis id k, as it appears in Y0 and the data
  std::vector<Relation> exogenous;   // keyed by phi and tid
  std::vector<Relation> endogenous;  // carry an upsilon column
};

struct U4Result {
  std::vector<URelation> relations;  // Y_k^1.. : u-factors first, then predictions
  ProjectionMap map;
};

// Predictive projection for one endogenous scheme: Y0 restricted to
// upsilon = k, joined through tid with the exogenous relations meeting `s`
// and their u-factors on pivots in `s`, then with hq; tid is dropped.
// Integrity error when an attribute of s has no u-factor or hq column, or a
// trial of hq has no exogenous row.
URelation u_propagate(const Relation& hq, const AttrSet& s, const AttrSet& t, const FDSet& gamma_fold,
                      const Hypothesis& h, const std::vector<URelation>& factors, const ProjectionMap& m,
                      const URelation& y0);

// Synthesis for uncertainty over the folding of the learned gamma. Part one
// designs schemes over the phi-fds and builds one u-factor per pivot (pivots
// of singleton groups included); part two designs schemes over the
// upsilon-fds and propagates. Names are Y<k>_1, Y<k>_2, ...
U4Result synthesize4u(const FDSet& gamma_fold, const Hypothesis& h, const URelation& y0, WorldTable& w);

}  // namespace hypc
