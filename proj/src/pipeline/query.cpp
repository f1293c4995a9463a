// SPDX-License-Identifier: Apache-2.0
#include "pipeline/query.hpp"

#include <algorithm>
#include <cctype>

#include "common/error.hpp"

namespace hypc {

namespace {

struct Token {
  enum class Kind { Open, Close, Atom, End } kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    std::size_t at = i_;
    if (i_ == s_.size()) return {Token::Kind::End, "", at};
    char c = s_[i_];
    if (c == '(' || c == ')') {
      ++i_;
      return {c == '(' ? Token::Kind::Open : Token::Kind::Close, std::string(1, c), at};
    }
    std::string out;
    if (c == '"') {
      ++i_;
      for (;;) {
        if (i_ == s_.size()) fail(ErrorKind::Parse, "unterminated string at offset " + std::to_string(at));
        char d = s_[i_++];
        if (d == '"') break;
        if (d == '\\') {
          if (i_ == s_.size()) fail(ErrorKind::Parse, "dangling escape at offset " + std::to_string(i_ - 1));
          d = s_[i_++];
        }
        out += d;
      }
      return {Token::Kind::Atom, out, at};
    }
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' && s_[i_] != ')' &&
           s_[i_] != '"')
      out += s_[i_++];
    return {Token::Kind::Atom, out, at};
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view s) : lex_(s) { advance(); }

  Query parse_all() {
    Query q = query();
    if (tok_.kind != Token::Kind::End) error("trailing input");
    return q;
  }

 private:
  [[noreturn]] void error(const std::string& what) {
    fail(ErrorKind::Parse, what + " at offset " + std::to_string(tok_.pos));
  }
  void advance() { tok_ = lex_.next(); }
  void expect(Token::Kind k, const char* what) {
    if (tok_.kind != k) error(std::string("expected ") + what);
    advance();
  }
  std::string atom(const char* what) {
    if (tok_.kind != Token::Kind::Atom) error(std::string("expected ") + what);
    std::string s = tok_.text;
    advance();
    return s;
  }

  Query query() {
    if (tok_.kind == Token::Kind::Atom) return Query{Query::Kind::Relation, atom("relation name"), {}, {}, {}};
    expect(Token::Kind::Open, "'(' or relation name");
    std::string op = atom("operator");
    Query q;
    if (op == "select") {
      q.kind = Query::Kind::Select;
      q.pred = predicate();
      q.args.push_back(std::make_shared<Query>(query()));
    } else if (op == "project") {
      q.kind = Query::Kind::Project;
      expect(Token::Kind::Open, "'(' before the column list");
      while (tok_.kind == Token::Kind::Atom) q.columns.push_back(atom("column"));
      expect(Token::Kind::Close, "')' after the column list");
      q.args.push_back(std::make_shared<Query>(query()));
    } else if (op == "join") {
      q.kind = Query::Kind::Join;
      q.args.push_back(std::make_shared<Query>(query()));
      q.args.push_back(std::make_shared<Query>(query()));
    } else {
      error("unknown operator '" + op + "'");
    }
    expect(Token::Kind::Close, "')'");
    return q;
  }

  Predicate predicate() {
    if (tok_.kind == Token::Kind::Atom) {
      if (tok_.text != "true") error("expected a predicate");
      advance();
      return Predicate::always();
    }
    expect(Token::Kind::Open, "'(' before a predicate");
    std::string op = atom("predicate operator");
    static const std::vector<std::pair<std::string, Predicate::Op>> cmp = {
        {"=", Predicate::Op::Eq}, {"!=", Predicate::Op::Ne}, {"<", Predicate::Op::Lt},
        {"<=", Predicate::Op::Le}, {">", Predicate::Op::Gt}, {">=", Predicate::Op::Ge}};
    Predicate p;
    auto c = std::find_if(cmp.begin(), cmp.end(), [&](const auto& e) { return e.first == op; });
    if (c != cmp.end()) {
      std::string column = atom("column");
      p = Predicate::compare(c->second, column, atom("value"));
    } else if (op == "and" || op == "or") {
      std::vector<Predicate> args;
      while (tok_.kind != Token::Kind::Close) args.push_back(predicate());
      p = Predicate::combine(op == "and" ? Predicate::Op::And : Predicate::Op::Or, std::move(args));
    } else if (op == "not") {
      p = Predicate::combine(Predicate::Op::Not, {predicate()});
    } else {
      error("unknown predicate operator '" + op + "'");
    }
    expect(Token::Kind::Close, "')' after a predicate");
    return p;
  }

  Lexer lex_;
  Token tok_{Token::Kind::End, "", 0};
};

std::string quote(const std::string& s) {
  bool bare = !s.empty() && s != "true" &&
              std::none_of(s.begin(), s.end(), [](char c) {
                return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '"' || c == '\\';
              });
  if (bare) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string predicate_text(const Predicate& p) {
  using Op = Predicate::Op;
  switch (p.op) {
    case Op::True: return "true";
    case Op::Eq: return "(= " + quote(p.column) + " " + quote(p.value) + ")";
    case Op::Ne: return "(!= " + quote(p.column) + " " + quote(p.value) + ")";
    case Op::Lt: return "(< " + quote(p.column) + " " + quote(p.value) + ")";
    case Op::Le: return "(<= " + quote(p.column) + " " + quote(p.value) + ")";
    case Op::Gt: return "(> " + quote(p.column) + " " + quote(p.value) + ")";
    case Op::Ge: return "(>= " + quote(p.column) + " " + quote(p.value) + ")";
    case Op::And:
    case Op::Or: {
      std::string s = p.op == Op::And ? "(and" : "(or";
      for (auto& a : p.args) s += " " + predicate_text(a);
      return s + ")";
    }
    case Op::Not: return "(not " + predicate_text(p.args.at(0)) + ")";
  }
  return "true";
}

}  // namespace

std::string Query::to_string() const {
  switch (kind) {
    case Kind::Relation: return quote(name);
    case Kind::Select: return "(select " + predicate_text(pred) + " " + args[0]->to_string() + ")";
    case Kind::Project: {
      std::string s = "(project (";
      for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? " " : "") + quote(columns[i]);
      return s + ") " + args[0]->to_string() + ")";
    }
    case Kind::Join: return "(join " + args[0]->to_string() + " " + args[1]->to_string() + ")";
  }
  return {};
}

Query parse_query(std::string_view text) { return Parser(text).parse_all(); }

URelation evaluate(const Query& q, const Database& db) {
  switch (q.kind) {
    case Query::Kind::Relation: {
      auto it = db.find(q.name);
      if (it == db.end()) fail(ErrorKind::Domain, "unknown relation '" + q.name + "'");
      return it->second;
    }
    case Query::Kind::Select: return u_select(evaluate(*q.args[0], db), q.pred);
    case Query::Kind::Project: return u_project(evaluate(*q.args[0], db), q.columns);
    case Query::Kind::Join: {
      URelation r = evaluate(*q.args[0], db), s = evaluate(*q.args[1], db);
      std::vector<std::string> on;
      for (auto& c : r.cols)
        if (s.has(c)) on.push_back(c);
      return u_join(r, s, on);
    }
  }
  fail(ErrorKind::Domain, "unknown node");
}

}  // namespace hypc
