// SPDX-License-Identifier: Apache-2.0
#include "urel/csv.hpp"

#include "common/error.hpp"

namespace hypc {

namespace {

std::vector<std::vector<std::string>> records(std::string_view text) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, field_started = false;
  std::size_t line = 1;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    if (!(record.size() == 1 && record[0].empty())) out.push_back(std::move(record));
    record.clear();
    ++line;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started) fail(ErrorKind::Parse, "CSV line " + std::to_string(line) + ": stray quote");
        quoted = field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (quoted) fail(ErrorKind::Parse, "CSV: unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return out;
}

std::string quote(const std::string& v) {
  if (v.find_first_of(",\"\r\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  auto recs = records(text);
  if (recs.empty()) fail(ErrorKind::Parse, "CSV: missing header row");
  CsvTable t;
  t.header = std::move(recs.front());
  for (std::size_t i = 1; i < recs.size(); ++i) {
    if (recs[i].size() != t.header.size())
      fail(ErrorKind::Parse, "CSV record " + std::to_string(i + 1) + " has " + std::to_string(recs[i].size()) +
                                 " fields, header has " + std::to_string(t.header.size()));
    t.rows.push_back(std::move(recs[i]));
  }
  return t;
}

std::string write_csv(const CsvTable& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out.push_back(',');
      out += quote(r[i]);
    }
    out.push_back('\n');
  };
  line(table.header);
  for (auto& r : table.rows) line(r);
  return out;
}

}  // namespace hypc
