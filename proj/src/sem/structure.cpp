// SPDX-License-Identifier: Apache-2.0
#include "sem/structure.hpp"

#include <json.hpp>
#include <set>

#include "common/error.hpp"
#include "sem/matching.hpp"

namespace hypc {

using nlohmann::json;

std::size_t Structure::var_index(std::string_view name) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i] == name) return i;
  fail(ErrorKind::Domain, "unknown variable '" + std::string(name) + "'");
}

namespace {

std::vector<bool> parse_matrix_row(const json& row, std::size_t width, std::size_t r) {
  std::vector<bool> out;
  if (row.is_string()) {
    for (char c : row.get<std::string>()) {
      if (c == ' ') continue;
      if (c != '0' && c != '1') fail(ErrorKind::Parse, "matrix row " + std::to_string(r + 1) + ": expected 0/1");
      out.push_back(c == '1');
    }
  } else if (row.is_array()) {
    for (auto& v : row) {
      if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1))
        fail(ErrorKind::Parse, "matrix row " + std::to_string(r + 1) + ": expected 0/1");
      out.push_back(v.get<int>() == 1);
    }
  } else {
    fail(ErrorKind::Parse, "matrix rows must be arrays or strings");
  }
  if (out.size() != width)
    fail(ErrorKind::Parse, "matrix row " + std::to_string(r + 1) + " has " + std::to_string(out.size()) +
                               " entries, expected " + std::to_string(width));
  return out;
}

}  // namespace

Structure Structure::from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, std::string("structure JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::Parse, "structure JSON must be an object");
  if (!doc.contains("variables") || !doc["variables"].is_array())
    fail(ErrorKind::Parse, "structure JSON needs a \"variables\" array");

  Structure s;
  std::set<std::string> seen;
  for (auto& v : doc["variables"]) {
    if (!v.is_string()) fail(ErrorKind::Parse, "variable names must be strings");
    auto name = Catalog::canonical_name(v.get<std::string>());
    if (!Catalog::valid_name(name)) fail(ErrorKind::Parse, "invalid variable name '" + name + "'");
    if (name == "phi" || name == "upsilon" || name == "tid")
      fail(ErrorKind::Domain, "'" + name + "' is reserved and cannot name a variable");
    if (!seen.insert(name).second) fail(ErrorKind::Parse, "duplicate variable '" + name + "'");
    s.variables.push_back(name);
  }
  if (doc.contains("domain_prefix")) {
    if (!doc["domain_prefix"].is_number_unsigned()) fail(ErrorKind::Parse, "domain_prefix must be a count");
    s.domain_prefix = doc["domain_prefix"].get<std::size_t>();
    if (s.domain_prefix > s.variables.size()) fail(ErrorKind::Parse, "domain_prefix exceeds variable count");
  }

  if (doc.contains("equations")) {
    if (!doc["equations"].is_array()) fail(ErrorKind::Parse, "\"equations\" must be an array");
    std::set<std::string> ids;
    for (auto& e : doc["equations"]) {
      Equation eq;
      eq.id = e.value("id", "f" + std::to_string(s.equations.size() + 1));
      if (!ids.insert(eq.id).second) fail(ErrorKind::Parse, "duplicate equation id '" + eq.id + "'");
      if (!e.contains("vars") || !e["vars"].is_array())
        fail(ErrorKind::Parse, "equation '" + eq.id + "' needs a \"vars\" array");
      for (auto& v : e["vars"]) {
        if (!v.is_string()) fail(ErrorKind::Parse, "equation '" + eq.id + "': variable names must be strings");
        auto name = Catalog::canonical_name(v.get<std::string>());
        if (!seen.count(name)) fail(ErrorKind::Parse, "equation '" + eq.id + "' mentions unknown variable '" + name + "'");
        eq.vars.insert(static_cast<AttrId>(s.var_index(name)));
      }
      s.equations.push_back(std::move(eq));
    }
  }

  if (doc.contains("matrix")) {
    auto& m = doc["matrix"];
    if (!m.is_array()) fail(ErrorKind::Parse, "\"matrix\" must be an array of rows");
    std::vector<Equation> from_matrix;
    for (std::size_t r = 0; r < m.size(); ++r) {
      auto row = parse_matrix_row(m[r], s.variables.size(), r);
      Equation eq;
      eq.id = "f" + std::to_string(r + 1);
      for (std::size_t c = 0; c < row.size(); ++c)
        if (row[c]) eq.vars.insert(static_cast<AttrId>(c));
      from_matrix.push_back(std::move(eq));
    }
    if (s.equations.empty()) {
      s.equations = std::move(from_matrix);
    } else {
      if (from_matrix.size() != s.equations.size())
        fail(ErrorKind::Parse, "matrix row count disagrees with the equation list");
      for (std::size_t r = 0; r < from_matrix.size(); ++r)
        if (!(from_matrix[r].vars == s.equations[r].vars))
          fail(ErrorKind::Parse, "matrix row " + std::to_string(r + 1) + " disagrees with equation '" +
                                     s.equations[r].id + "'");
    }
  }

  if (s.equations.empty()) fail(ErrorKind::Parse, "structure has no equations");
  IndexSet used;
  for (auto& eq : s.equations) {
    if (eq.vars.empty()) fail(ErrorKind::Parse, "equation '" + eq.id + "' mentions no variable");
    used |= eq.vars;
  }
  for (std::size_t v = 0; v < s.variables.size(); ++v)
    if (!used.contains(static_cast<AttrId>(v)))
      fail(ErrorKind::Parse, "variable '" + s.variables[v] + "' appears in no equation");
  return s;
}

std::string Structure::to_json() const {
  json doc;
  doc["variables"] = variables;
  doc["domain_prefix"] = domain_prefix;
  doc["equations"] = json::array();
  for (auto& eq : equations) {
    json vars = json::array();
    eq.vars.for_each([&](AttrId v) { vars.push_back(variables[v]); });
    doc["equations"].push_back({{"id", eq.id}, {"vars", vars}});
  }
  return doc.dump(2);
}

bool check_complete(const Structure& s) { return s.equations.size() == s.variables.size(); }

void require_well_formed(const Structure& s) {
  if (!check_complete(s))
    fail(ErrorKind::Precondition, "incomplete structure: |E|=" + std::to_string(s.equations.size()) +
                                      ", |V|=" + std::to_string(s.variables.size()));
  // Hall's condition: a perfect matching exists iff every k equations mention >= k variables.
  std::vector<std::vector<std::size_t>> adj(s.equations.size());
  for (std::size_t e = 0; e < s.equations.size(); ++e)
    s.equations[e].vars.for_each([&](AttrId v) { adj[e].push_back(v); });
  detail::BipartiteMatcher m(adj, s.variables.size());
  if (m.run() != s.equations.size())
    fail(ErrorKind::Precondition, "malformed structure: some k equations mention fewer than k variables");
  for (std::size_t e = 0; e < s.domain_prefix; ++e)
    s.equations[e].vars.for_each([&](AttrId v) {
      if (v >= s.domain_prefix)
        fail(ErrorKind::Precondition, "malformed structure: domain equation '" + s.equations[e].id +
                                          "' mentions non-domain variable '" + s.variables[v] + "'");
    });
}

}  // namespace hypc
