// SPDX-License-Identifier: Apache-2.0
#include "urel/value.hpp"

#include <cctype>
#include <charconv>

namespace hypc {

namespace {

struct Decimal {
  bool negative = false;
  std::string digits;  // significant digits, no leading or trailing zeros
  long long exponent = 0;  // value = 0.digits * 10^exponent
};

std::optional<Decimal> parse_decimal(std::string_view v) {
  std::size_t i = 0;
  Decimal d;
  if (i < v.size() && (v[i] == '+' || v[i] == '-')) d.negative = v[i++] == '-';
  std::string mantissa;
  long long point = -1;
  bool any = false;
  for (; i < v.size(); ++i) {
    char c = v[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa.push_back(c);
      any = true;
    } else if (c == '.' && point < 0) {
      point = static_cast<long long>(mantissa.size());
    } else {
      break;
    }
  }
  if (!any) return std::nullopt;
  if (point < 0) point = static_cast<long long>(mantissa.size());
  long long exp10 = 0;
  if (i < v.size() && (v[i] == 'e' || v[i] == 'E')) {
    ++i;
    bool neg = false;
    if (i < v.size() && (v[i] == '+' || v[i] == '-')) neg = v[i++] == '-';
    if (i == v.size()) return std::nullopt;
    for (; i < v.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(v[i]))) return std::nullopt;
      if (exp10 < 1'000'000'000) exp10 = exp10 * 10 + (v[i] - '0');
    }
    if (neg) exp10 = -exp10;
  }
  if (i != v.size()) return std::nullopt;

  std::size_t lead = mantissa.find_first_not_of('0');
  if (lead == std::string::npos) return Decimal{};  // zero, sign dropped
  std::size_t trail = mantissa.find_last_not_of('0');
  d.digits = mantissa.substr(lead, trail - lead + 1);
  d.exponent = point - static_cast<long long>(lead) + exp10;
  return d;
}

}  // namespace

std::string canonical_value(std::string_view v) {
  auto d = parse_decimal(v);
  if (!d) return std::string(v);
  if (d->digits.empty()) return "0";
  std::string out = d->negative ? "-" : "";
  out += d->digits;
  out += "e" + std::to_string(d->exponent - static_cast<long long>(d->digits.size()));
  return out;
}

bool same_value(std::string_view a, std::string_view b) { return a == b || canonical_value(a) == canonical_value(b); }

std::optional<double> numeric_value(std::string_view v) {
  if (!parse_decimal(v)) return std::nullopt;
  if (!v.empty() && v.front() == '+') v.remove_prefix(1);
  double out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) return std::nullopt;
  return out;
}

int compare_values(std::string_view a, std::string_view b) {
  auto x = numeric_value(a), y = numeric_value(b);
  if (x && y) {
    if (*x < *y) return -1;
    if (*x > *y) return 1;
    auto ca = canonical_value(a), cb = canonical_value(b);
    return ca < cb ? -1 : (ca > cb ? 1 : 0);
  }
  if (x) return -1;
  if (y) return 1;
  return a < b ? -1 : (a > b ? 1 : 0);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace hypc
