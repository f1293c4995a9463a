// SPDX-License-Identifier: Apache-2.0
#include "urel/urel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "common/error.hpp"
#include "urel/csv.hpp"
#include "urel/value.hpp"

namespace hypc {

namespace {

std::size_t find_col(const std::vector<std::string>& cols, const std::string& c, const std::string& owner) {
  auto it = std::find(cols.begin(), cols.end(), c);
  if (it == cols.end()) fail(ErrorKind::Domain, "no column '" + c + "' in " + (owner.empty() ? "relation" : owner));
  return static_cast<std::size_t>(it - cols.begin());
}

std::vector<std::string> canonical_row(const std::vector<std::string>& row, const std::vector<std::size_t>& at) {
  std::vector<std::string> out;
  out.reserve(at.size());
  for (auto i : at) out.push_back(canonical_value(row[i]));
  return out;
}

std::vector<std::size_t> all_columns(std::size_t n) {
  std::vector<std::size_t> at(n);
  for (std::size_t i = 0; i < n; ++i) at[i] = i;
  return at;
}

bool looks_like_condition_column(const std::string& c) {
  if (c.size() < 2 || (c[0] != 'V' && c[0] != 'D')) return false;
  return std::all_of(c.begin() + 1, c.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

// Merges b into a; false when a variable is assigned two values.
bool merge_into(Condition& a, const Condition& b) {
  for (auto& x : b) {
    auto it = std::find_if(a.begin(), a.end(), [&](const Assignment& y) { return y.var == x.var; });
    if (it == a.end())
      a.push_back(x);
    else if (it->value != x.value)
      return false;
  }
  return true;
}

bool rows_less(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (int c = compare_values(a[i], b[i]); c != 0) return c < 0;
  return false;
}

}  // namespace

std::size_t Relation::col(const std::string& c) const { return find_col(cols, c, name); }
bool Relation::has(const std::string& c) const { return std::find(cols.begin(), cols.end(), c) != cols.end(); }

void Relation::check_key() const {
  std::vector<std::size_t> at;
  for (auto& k : key) at.push_back(col(k));
  if (key.empty()) at = all_columns(cols.size());
  std::map<std::vector<std::string>, std::size_t> seen;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto [it, fresh] = seen.emplace(canonical_row(rows[i], at), i);
    if (!fresh)
      fail(ErrorKind::Integrity, (name.empty() ? std::string("relation") : name) + ": rows " +
                                     std::to_string(it->second + 1) + " and " + std::to_string(i + 1) +
                                     " share a key value");
  }
}

std::size_t URelation::col(const std::string& c) const { return find_col(cols, c, name); }
bool URelation::has(const std::string& c) const { return std::find(cols.begin(), cols.end(), c) != cols.end(); }

URelation URelation::classical(const Relation& r) {
  URelation out{r.name, 0, r.cols, {}};
  for (auto& row : r.rows) out.rows.push_back({{}, row});
  return out;
}

VarId WorldTable::add(std::vector<double> marginals) {
  if (marginals.empty()) fail(ErrorKind::Domain, "random variable needs a non-empty domain");
  VarId id = static_cast<VarId>(vars_.size());
  vars_.push_back({id, std::move(marginals)});
  return id;
}

const RandVar& WorldTable::var(VarId id) const {
  if (id >= vars_.size()) fail(ErrorKind::Domain, "unknown random variable " + var_name(id));
  return vars_[id];
}

double WorldTable::pr(VarId id, ValueId d) const {
  const auto& v = var(id);
  if (d == 0 || d > v.marginals.size())
    fail(ErrorKind::Domain, var_name(id) + " has no value " + std::to_string(d));
  return v.marginals[d - 1];
}

void WorldTable::validate() const {
  for (auto& v : vars_) {
    double sum = 0;
    for (double p : v.marginals) {
      if (!(p > 0)) fail(ErrorKind::Integrity, var_name(v.id) + " has a non-positive marginal");
      sum += p;
    }
    if (std::abs(sum - 1) > 1e-9) fail(ErrorKind::Integrity, var_name(v.id) + " marginals sum to " + format_double(sum));
  }
}

std::string var_name(VarId v) { return "x" + std::to_string(v); }

VarId parse_var_name(const std::string& s) {
  if (s.size() < 2 || s[0] != 'x' || !std::all_of(s.begin() + 1, s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    fail(ErrorKind::Parse, "bad random variable name '" + s + "'");
  return static_cast<VarId>(std::stoul(s.substr(1)));
}

Predicate Predicate::compare(Op op, std::string column, std::string value) {
  if (op == Op::True || op == Op::And || op == Op::Or || op == Op::Not)
    fail(ErrorKind::Domain, "not a comparison operator");
  Predicate p;
  p.op = op;
  p.column = std::move(column);
  p.value = std::move(value);
  return p;
}

Predicate Predicate::combine(Op op, std::vector<Predicate> args) {
  if (op != Op::And && op != Op::Or && op != Op::Not) fail(ErrorKind::Domain, "not a connective");
  if (op == Op::Not && args.size() != 1) fail(ErrorKind::Domain, "not takes one argument");
  Predicate p;
  p.op = op;
  p.args = std::move(args);
  return p;
}

std::vector<std::string> Predicate::columns() const {
  std::vector<std::string> out;
  if (!column.empty()) out.push_back(column);
  for (auto& a : args)
    for (auto& c : a.columns())
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  return out;
}

bool Predicate::eval(const std::vector<std::string>& cols, const std::vector<std::string>& row) const {
  switch (op) {
    case Op::True:
      return true;
    case Op::And:
      return std::all_of(args.begin(), args.end(), [&](const Predicate& p) { return p.eval(cols, row); });
    case Op::Or:
      return std::any_of(args.begin(), args.end(), [&](const Predicate& p) { return p.eval(cols, row); });
    case Op::Not:
      return !args.front().eval(cols, row);
    default:
      break;
  }
  int c = compare_values(row[find_col(cols, column, "")], value);
  switch (op) {
    case Op::Eq: return c == 0;
    case Op::Ne: return c != 0;
    case Op::Lt: return c < 0;
    case Op::Le: return c <= 0;
    case Op::Gt: return c > 0;
    default: return c >= 0;
  }
}

URelation repair_key(const Relation& r, const std::vector<std::string>& x, const std::string& weight, WorldTable& w) {
  std::size_t wcol = r.col(weight);
  std::vector<std::size_t> xat;
  for (auto& c : x) {
    if (c == weight) fail(ErrorKind::Domain, "repair-key: weight column '" + weight + "' is part of the key");
    xat.push_back(r.col(c));
  }
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < r.cols.size(); ++i)
    if (i != wcol) rest.push_back(i);

  std::vector<double> weights;
  std::set<std::vector<std::string>> seen;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    auto v = numeric_value(r.rows[i][wcol]);
    if (!v || !(*v > 0) || !std::isfinite(*v))
      fail(ErrorKind::Domain, "repair-key: weight '" + r.rows[i][wcol] + "' in row " + std::to_string(i + 1) +
                                  " is not a positive number");
    weights.push_back(*v);
    if (!seen.insert(canonical_row(r.rows[i], rest)).second)
      fail(ErrorKind::Integrity, "repair-key: rows agree outside '" + weight + "' (row " + std::to_string(i + 1) + ")");
  }

  // Groups in first-appearance order; alternatives in row order.
  std::map<std::vector<std::string>, std::size_t> group_of;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    auto [it, fresh] = group_of.emplace(canonical_row(r.rows[i], xat), groups.size());
    if (fresh) groups.emplace_back();
    groups[it->second].push_back(i);
  }

  URelation out;
  out.name = r.name;
  out.k = r.rows.empty() ? 0 : 1;
  for (auto i : rest) out.cols.push_back(r.cols[i]);
  out.rows.resize(r.rows.size());
  for (auto& g : groups) {
    double sum = 0;
    for (auto i : g) sum += weights[i];
    std::vector<double> m;
    for (auto i : g) m.push_back(weights[i] / sum);
    VarId v = w.add(std::move(m));
    for (std::size_t a = 0; a < g.size(); ++a) {
      auto& row = out.rows[g[a]];
      row.cond = {{v, static_cast<ValueId>(a + 1)}};
      for (auto i : rest) row.values.push_back(r.rows[g[a]][i]);
    }
  }
  return out;
}

URelation u_select(const URelation& r, const Predicate& pred) {
  for (auto& c : pred.columns()) {
    if (r.has(c)) continue;
    if (looks_like_condition_column(c))
      fail(ErrorKind::Domain, "selection may not read condition column '" + c + "'");
    fail(ErrorKind::Domain, "selection reads unknown column '" + c + "'");
  }
  URelation out{r.name, r.k, r.cols, {}};
  for (auto& row : r.rows)
    if (pred.eval(r.cols, row.values)) out.rows.push_back(row);
  return out;
}

URelation u_project(const URelation& r, const std::vector<std::string>& z) {
  std::vector<std::size_t> at;
  for (auto& c : z) at.push_back(r.col(c));
  URelation out{r.name, r.k, z, {}};
  for (auto& row : r.rows) {
    URow nr{row.cond, {}};
    for (auto i : at) nr.values.push_back(row.values[i]);
    out.rows.push_back(std::move(nr));
  }
  return out;
}

URelation u_join(const URelation& r, const URelation& s, const std::vector<std::string>& on) {
  std::vector<std::size_t> rat, sat;
  for (auto& c : on) {
    rat.push_back(r.col(c));
    sat.push_back(s.col(c));
  }
  std::vector<std::size_t> s_rest;
  for (std::size_t i = 0; i < s.cols.size(); ++i) {
    if (std::find(on.begin(), on.end(), s.cols[i]) != on.end()) continue;
    if (r.has(s.cols[i]))
      fail(ErrorKind::Domain, "column '" + s.cols[i] + "' occurs in both join inputs but is not joined on");
    s_rest.push_back(i);
  }
  URelation out;
  out.name = r.name + "_" + s.name;
  out.cols = r.cols;
  for (auto i : s_rest) out.cols.push_back(s.cols[i]);

  std::multimap<std::vector<std::string>, std::size_t> s_index;
  for (std::size_t j = 0; j < s.rows.size(); ++j) s_index.emplace(canonical_row(s.rows[j].values, sat), j);
  std::size_t width = 0;
  for (auto& row : r.rows) {
    auto [lo, hi] = s_index.equal_range(canonical_row(row.values, rat));
    for (auto it = lo; it != hi; ++it) {
      const URow& other = s.rows[it->second];
      URow nr{row.cond, row.values};
      if (!merge_into(nr.cond, other.cond)) continue;
      for (auto i : s_rest) nr.values.push_back(other.values[i]);
      width = std::max(width, nr.cond.size());
      out.rows.push_back(std::move(nr));
    }
  }
  out.k = out.rows.empty() ? r.k + s.k : width;
  return out;
}

bool satisfied(const Condition& c, const std::vector<ValueId>& theta) {
  return std::all_of(c.begin(), c.end(), [&](const Assignment& a) { return a.var < theta.size() && theta[a.var] == a.value; });
}

Relation decode(const URelation& r, const std::vector<ValueId>& theta) {
  Relation out{r.name, r.cols, {}, {}};
  std::set<std::vector<std::string>> seen;
  auto all = all_columns(r.cols.size());
  for (auto& row : r.rows)
    if (satisfied(row.cond, theta) && seen.insert(canonical_row(row.values, all)).second) out.rows.push_back(row.values);
  std::sort(out.rows.begin(), out.rows.end(), rows_less);
  return out;
}

namespace {

std::size_t checked_count(const std::vector<std::size_t>& sizes, std::size_t cap) {
  std::size_t total = 1;
  for (auto n : sizes) {
    if (n != 0 && total > cap / n) fail(ErrorKind::Capacity, "more than " + std::to_string(cap) + " possible worlds");
    total *= n;
  }
  if (total > cap) fail(ErrorKind::Capacity, "more than " + std::to_string(cap) + " possible worlds");
  return total;
}

}  // namespace

void for_each_world(const WorldTable& w, std::size_t cap, const std::function<void(const World&)>& f) {
  std::vector<std::size_t> sizes;
  for (auto& v : w.vars()) sizes.push_back(v.marginals.size());
  checked_count(sizes, cap);
  World cur;
  cur.theta.assign(sizes.size(), 1);
  while (true) {
    cur.pr = 1;
    for (std::size_t v = 0; v < sizes.size(); ++v) cur.pr *= w.vars()[v].marginals[cur.theta[v] - 1];
    f(cur);
    std::size_t v = sizes.size();
    while (v > 0) {
      --v;
      if (cur.theta[v] < sizes[v]) {
        ++cur.theta[v];
        break;
      }
      cur.theta[v] = 1;
      if (v == 0) return;
    }
    if (sizes.empty()) return;
  }
}

std::vector<World> enumerate_worlds(const WorldTable& w, std::size_t cap) {
  std::vector<World> out;
  for_each_world(w, cap, [&](const World& x) { out.push_back(x); });
  return out;
}

double world_probability(const WorldTable& w, const std::vector<Assignment>& theta) {
  double p = 1;
  std::set<VarId> seen;
  for (auto& a : theta) {
    if (!seen.insert(a.var).second) fail(ErrorKind::Domain, var_name(a.var) + " assigned twice");
    p *= w.pr(a.var, a.value);
  }
  return p;
}

double conf(const URelation& r, const WorldTable& w, const std::vector<std::string>& tuple, std::size_t cap) {
  if (tuple.size() != r.cols.size())
    fail(ErrorKind::Domain, "tuple has " + std::to_string(tuple.size()) + " values, relation has " +
                                std::to_string(r.cols.size()) + " columns");
  // Only rows carrying the tuple matter; the answer is Pr(any of their conditions).
  std::vector<const Condition*> conds;
  for (auto& row : r.rows) {
    bool match = true;
    for (std::size_t i = 0; i < tuple.size() && match; ++i) match = same_value(row.values[i], tuple[i]);
    if (match) conds.push_back(&row.cond);
  }
  std::vector<VarId> vars;
  for (auto* c : conds)
    for (auto& a : *c)
      if (std::find(vars.begin(), vars.end(), a.var) == vars.end()) vars.push_back(a.var);
  std::sort(vars.begin(), vars.end());
  std::vector<std::size_t> sizes;
  for (auto v : vars) sizes.push_back(w.var(v).marginals.size());
  checked_count(sizes, cap);

  std::vector<ValueId> theta(w.size(), 0), digit(vars.size(), 1);
  double total = 0;
  if (conds.empty()) return 0;
  while (true) {
    double p = 1;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      theta[vars[i]] = digit[i];
      p *= w.pr(vars[i], digit[i]);
    }
    if (std::any_of(conds.begin(), conds.end(), [&](const Condition* c) { return satisfied(*c, theta); })) total += p;
    std::size_t i = vars.size();
    bool done = true;
    while (i > 0) {
      --i;
      if (digit[i] < sizes[i]) {
        ++digit[i];
        done = false;
        break;
      }
      digit[i] = 1;
    }
    if (done) break;
  }
  return total;
}

Relation relation_from_csv(const std::string& name, const std::string& text) {
  auto t = parse_csv(text);
  std::set<std::string> names;
  for (auto& h : t.header)
    if (!names.insert(h).second) fail(ErrorKind::Parse, name + ": duplicate column '" + h + "'");
  return Relation{name, t.header, {}, t.rows};
}

std::string relation_to_csv(const Relation& r) { return write_csv(CsvTable{r.cols, r.rows}); }

std::string urelation_to_csv(const URelation& r) {
  CsvTable t;
  for (std::size_t i = 1; i <= r.k; ++i) {
    t.header.push_back("V" + std::to_string(i));
    t.header.push_back("D" + std::to_string(i));
  }
  t.header.insert(t.header.end(), r.cols.begin(), r.cols.end());
  for (auto& row : r.rows) {
    std::vector<std::string> cells;
    for (std::size_t i = 0; i < r.k; ++i) {
      if (i < row.cond.size()) {
        cells.push_back(var_name(row.cond[i].var));
        cells.push_back(std::to_string(row.cond[i].value));
      } else {
        cells.emplace_back();
        cells.emplace_back();
      }
    }
    cells.insert(cells.end(), row.values.begin(), row.values.end());
    t.rows.push_back(std::move(cells));
  }
  return write_csv(t);
}

URelation urelation_from_csv(const std::string& name, const std::string& text) {
  auto t = parse_csv(text);
  URelation out;
  out.name = name;
  while (2 * out.k + 1 < t.header.size() && t.header[2 * out.k] == "V" + std::to_string(out.k + 1) &&
         t.header[2 * out.k + 1] == "D" + std::to_string(out.k + 1))
    ++out.k;
  out.cols.assign(t.header.begin() + static_cast<std::ptrdiff_t>(2 * out.k), t.header.end());
  for (auto& cells : t.rows) {
    URow row;
    for (std::size_t i = 0; i < out.k; ++i) {
      const auto& v = cells[2 * i];
      const auto& d = cells[2 * i + 1];
      if (v.empty() && d.empty()) continue;
      auto value = numeric_value(d);
      if (!value || *value < 1 || *value != std::floor(*value))
        fail(ErrorKind::Parse, name + ": bad condition value '" + d + "'");
      row.cond.push_back({parse_var_name(v), static_cast<ValueId>(*value)});
    }
    Condition check;
    if (!merge_into(check, row.cond)) fail(ErrorKind::Integrity, name + ": row assigns a variable two values");
    row.values.assign(cells.begin() + static_cast<std::ptrdiff_t>(2 * out.k), cells.end());
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::string world_table_to_csv(const WorldTable& w) {
  CsvTable t{{"V", "D", "Pr"}, {}};
  for (auto& v : w.vars())
    for (std::size_t d = 0; d < v.marginals.size(); ++d)
      t.rows.push_back({var_name(v.id), std::to_string(d + 1), format_double(v.marginals[d])});
  return write_csv(t);
}

WorldTable world_table_from_csv(const std::string& text) {
  auto t = parse_csv(text);
  if (t.header != std::vector<std::string>{"V", "D", "Pr"}) fail(ErrorKind::Parse, "world table header must be V,D,Pr");
  std::vector<std::vector<double>> marginals;
  for (auto& r : t.rows) {
    VarId v = parse_var_name(r[0]);
    auto d = numeric_value(r[1]);
    auto p = numeric_value(r[2]);
    if (!d || !p) fail(ErrorKind::Parse, "world table: bad row for " + r[0]);
    if (v == marginals.size()) marginals.emplace_back();
    if (v + 1 != marginals.size() || *d != static_cast<double>(marginals.back().size() + 1))
      fail(ErrorKind::Parse, "world table rows must list x0, x1, ... with values 1, 2, ... in order");
    marginals.back().push_back(*p);
  }
  WorldTable w;
  for (auto& m : marginals) w.add(std::move(m));
  w.validate();
  return w;
}

}  // namespace hypc
