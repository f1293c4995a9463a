// SPDX-License-Identifier: Apache-2.0
#include "sem/encode.hpp"

#include "common/error.hpp"

namespace hypc {

FDSet h_encode(const Structure& s, const CausalMapping& m) {
  auto cat = std::make_shared<Catalog>();
  std::vector<AttrId> attr_of(s.variables.size());
  for (std::size_t v = 0; v < s.variables.size(); ++v) attr_of[v] = cat->intern(s.variables[v]);

  FDSet sigma(cat);
  for (std::size_t e = 0; e < s.equations.size(); ++e) {
    std::size_t target = m.var_of_eq.at(e);
    if (s.is_domain(target)) continue;
    const IndexSet& z = s.equations[e].vars;
    bool exogenous = true;
    z.for_each([&](AttrId v) {
      if (v != target && !s.is_domain(v)) exogenous = false;
    });
    FD fd;
    fd.rhs.insert(attr_of[target]);
    if (exogenous) {
      fd.lhs.insert(Catalog::kPhi);
    } else {
      fd.lhs.insert(Catalog::kUpsilon);
      z.for_each([&](AttrId v) {
        if (v != target) fd.lhs.insert(attr_of[v]);
      });
    }
    sigma.add(fd);
  }
  return sigma;
}

FDSet h_encode(const Structure& s) { return h_encode(s, coa_t(s)); }

AttrClass classify(AttrId a, const FDSet& sigma) {
  if (!sigma.universe().contains(a)) fail(ErrorKind::Domain, "attribute is not in the FD set's universe");
  if (sigma.cat().kind(a) != AttrKind::User) return AttrClass::Epistemic;
  bool determined = false;
  for (auto& fd : sigma) {
    if (!fd.rhs.contains(a) || fd.lhs.contains(a)) continue;
    determined = true;
    if (fd.lhs.contains(Catalog::kUpsilon)) return AttrClass::Endogenous;
  }
  return determined ? AttrClass::Exogenous : AttrClass::Domain;
}

std::string_view to_string(AttrClass c) {
  switch (c) {
    case AttrClass::Epistemic: return "epistemic";
    case AttrClass::Exogenous: return "exogenous";
    case AttrClass::Endogenous: return "endogenous";
    case AttrClass::Domain: return "domain";
  }
  return "unknown";
}

}  // namespace hypc
