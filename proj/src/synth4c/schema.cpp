// SPDX-License-Identifier: Apache-2.0
#include "synth4c/schema.hpp"

#include <json.hpp>

#include "common/error.hpp"
#include "fd/reasoning.hpp"

namespace hypc {

using nlohmann::json;

AttrSet Schema::attrs() const {
  AttrSet out;
  for (auto& s : schemes) out |= s.attrs;
  return out;
}

const RelScheme* Schema::find(std::string_view name) const {
  for (auto& s : schemes)
    if (s.name == name) return &s;
  return nullptr;
}

std::string Schema::to_json() const {
  json doc = json::array();
  const Catalog& cat = source.cat();
  for (auto& s : schemes)
    doc.push_back({{"name", s.name}, {"attrs", cat.names_of(s.attrs)}, {"key", cat.names_of(s.key)}});
  return doc.dump(2) + "\n";
}

Schema Schema::from_json(std::string_view text, const FDSet& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, std::string("schema JSON: ") + e.what());
  }
  if (!doc.is_array()) fail(ErrorKind::Parse, "schema JSON must be an array of schemes");
  Schema out{{}, source};
  for (auto& item : doc) {
    if (!item.is_object() || !item.contains("name") || !item.contains("attrs") || !item.contains("key"))
      fail(ErrorKind::Parse, "each scheme needs name, attrs and key");
    RelScheme s;
    s.name = item["name"].get<std::string>();
    if (out.find(s.name)) fail(ErrorKind::Parse, "duplicate scheme name '" + s.name + "'");
    for (auto& a : item["attrs"]) s.attrs.insert(source.cat().at(a.get<std::string>()));
    for (auto& a : item["key"]) s.key.insert(source.cat().at(a.get<std::string>()));
    if (s.key.empty() || !s.key.subset_of(s.attrs))
      fail(ErrorKind::Parse, "scheme '" + s.name + "' has a key outside its attributes");
    out.schemes.push_back(std::move(s));
  }
  return out;
}

AttrSet minimal_key(const FDSet& sigma, const AttrSet& attrs) {
  AttrSet key = attrs;
  for (AttrId a : attrs.ids()) {
    AttrSet smaller = key - AttrSet{a};
    if (!smaller.empty() && attrs.subset_of(detail::closure_unchecked(sigma, smaller))) key = smaller;
  }
  return key;
}

Schema synthesize(const FDSet& sigma, const SynthOptions& opts) {
  auto rep = check_parsimonious(sigma);
  if (!rep.ok()) fail(ErrorKind::Precondition, "FD set is not parsimonious: " + rep.describe(sigma));

  Schema out{{}, sigma};
  for (auto& group : union_rule(sigma)) {
    RelScheme* target = nullptr;
    for (auto& s : out.schemes) {
      if (member(sigma, FD{group.lhs, s.key}) && member(sigma, FD{s.key, group.lhs})) {
        target = &s;
        break;
      }
    }
    if (target) {
      target->attrs |= group.lhs | group.rhs;
    } else {
      out.schemes.push_back(RelScheme{"R" + std::to_string(out.schemes.size() + 1), group.lhs | group.rhs, group.lhs});
    }
  }
  // Attributes no FD mentions still need a home; they form an all-key scheme.
  AttrSet loose = sigma.universe() - out.attrs();
  if (!loose.empty()) out.schemes.push_back(RelScheme{"R" + std::to_string(out.schemes.size() + 1), loose, loose});

  if (opts.force_lossless) {
    AttrSet u = sigma.universe();
    bool has_key = false;
    for (auto& s : out.schemes)
      if (u.subset_of(detail::closure_unchecked(sigma, s.attrs))) has_key = true;
    if (!has_key && !u.empty()) {
      AttrSet key = minimal_key(sigma, u);
      out.schemes.push_back(RelScheme{"R" + std::to_string(out.schemes.size() + 1), key, key});
    }
  }
  return out;
}

}  // namespace hypc
