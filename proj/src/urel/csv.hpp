// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hypc {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// RFC 4180 style: comma separated, double quotes escape, CRLF or LF line ends.
// The first record is the header; every record must match its width.
CsvTable parse_csv(std::string_view text);
std::string write_csv(const CsvTable& table);

}  // namespace hypc
