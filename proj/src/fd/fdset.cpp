// SPDX-License-Identifier: Apache-2.0
#include "fd/fdset.hpp"

#include <algorithm>
#include <sstream>

#include "common/error.hpp"

namespace hypc {

FDSet::FDSet(CatalogPtr catalog) : catalog_(std::move(catalog)) {
  if (!catalog_) fail(ErrorKind::Domain, "FD set requires a catalog");
}

FDSet::FDSet(CatalogPtr catalog, AttrSet universe) : FDSet(std::move(catalog)) {
  extend_universe(universe);
}

void FDSet::extend_universe(const AttrSet& attrs) {
  attrs.for_each([&](AttrId a) {
    if (a >= catalog_->size()) fail(ErrorKind::Domain, "attribute id not in catalog");
  });
  universe_ |= attrs;
}

bool FDSet::add(const FD& fd) {
  if (fd.lhs.empty()) fail(ErrorKind::Domain, "FD with empty left-hand side");
  if (fd.rhs.empty()) fail(ErrorKind::Domain, "FD with empty right-hand side");
  extend_universe(fd.attrs());
  if (!index_.insert(fd).second) return false;
  fds_.push_back(fd);
  return true;
}

namespace {

struct SplitFd {
  std::vector<std::string> lhs, rhs;
};

std::vector<std::string> tokens(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

SplitFd split_fd(std::string_view text, std::size_t line_no) {
  auto where = [&] { return line_no ? " (line " + std::to_string(line_no) + ")" : std::string(); };
  auto arrow = text.find("->");
  if (arrow == std::string_view::npos) fail(ErrorKind::Parse, "missing '->'" + where());
  if (text.find("->", arrow + 2) != std::string_view::npos)
    fail(ErrorKind::Parse, "more than one '->'" + where());
  SplitFd out{tokens(text.substr(0, arrow)), tokens(text.substr(arrow + 2))};
  if (out.lhs.empty()) fail(ErrorKind::Parse, "empty left-hand side" + where());
  if (out.rhs.empty()) fail(ErrorKind::Parse, "empty right-hand side" + where());
  return out;
}

}  // namespace

FD FDSet::parse_fd(std::string_view text) const {
  auto s = split_fd(text, 0);
  FD fd;
  for (auto& n : s.lhs) fd.lhs.insert(catalog_->at(n));
  for (auto& n : s.rhs) fd.rhs.insert(catalog_->at(n));
  return fd;
}

std::string FDSet::format(const FD& fd) const {
  return catalog_->format(fd.lhs) + " -> " + catalog_->format(fd.rhs);
}

std::set<std::pair<std::vector<std::string>, std::vector<std::string>>> FDSet::named() const {
  std::set<std::pair<std::vector<std::string>, std::vector<std::string>>> out;
  for (auto& fd : fds_) {
    auto l = catalog_->names_of(fd.lhs);
    auto r = catalog_->names_of(fd.rhs);
    std::sort(l.begin(), l.end());
    std::sort(r.begin(), r.end());
    out.emplace(std::move(l), std::move(r));
  }
  return out;
}

bool FDSet::same_as(const FDSet& other) const { return named() == other.named(); }

FDSet parse_fdset(std::string_view text, CatalogPtr base) {
  auto cat = base ? std::make_shared<Catalog>(*base) : std::make_shared<Catalog>();
  AttrSet declared;
  std::vector<std::pair<SplitFd, std::size_t>> lines;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line.rfind("#@attrs", 0) == 0) {
      for (auto& n : tokens(line.substr(7))) declared.insert(cat->intern(n));
      continue;
    }
    auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    if (tokens(line).empty()) continue;
    auto s = split_fd(line, line_no);
    for (auto& n : s.lhs) cat->intern(n);
    for (auto& n : s.rhs) cat->intern(n);
    lines.emplace_back(std::move(s), line_no);
  }

  FDSet out(cat, declared);
  for (auto& [s, no] : lines) {
    FD fd;
    for (auto& n : s.lhs) fd.lhs.insert(cat->at(n));
    for (auto& n : s.rhs) fd.rhs.insert(cat->at(n));
    out.add(fd);
  }
  return out;
}

std::string to_text(const FDSet& sigma) {
  std::string out = "#@attrs";
  sigma.universe().for_each([&](AttrId a) {
    out += ' ';
    out += sigma.cat().name(a);
  });
  out += '\n';
  for (auto& fd : sigma) {
    out += sigma.format(fd);
    out += '\n';
  }
  return out;
}

}  // namespace hypc
