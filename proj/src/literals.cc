// Copyright 2026 The MTP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mtp/literals.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <system_error>

namespace mtp {

std::string quote_string(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 2);
  out.push_back('"');
  for (char c : text) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

std::optional<std::string> unescape_string(std::string_view body) {
  std::string out;
  out.reserve(body.size());
  for (std::size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c != '\\') {
      out.push_back(c);
      continue;
    }
    if (++i == body.size()) return std::nullopt;
    switch (body[i]) {
      case 'n': out.push_back('\n'); break;
      case '"': out.push_back('"'); break;
      case '\\': out.push_back('\\'); break;
      default: return std::nullopt;
    }
  }
  return out;
}

std::string format_float(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  std::string out(buf, ec == std::errc{} ? end : buf);
  if (!std::isfinite(value)) return out;
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::size_t count_digits(std::string_view text, std::size_t pos) {
  std::size_t n = 0;
  while (pos + n < text.size() && is_digit(text[pos + n])) ++n;
  return n;
}

}  // namespace

std::size_t scan_number(std::string_view text) {
  std::size_t pos = count_digits(text, 0);
  if (pos == 0) return 0;
  if (pos + 1 < text.size() && text[pos] == '.' && is_digit(text[pos + 1])) {
    pos += 1 + count_digits(text, pos + 1);
  }
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    std::size_t exp = pos + 1;
    if (exp < text.size() && (text[exp] == '+' || text[exp] == '-')) ++exp;
    std::size_t digits = count_digits(text, exp);
    if (digits > 0) pos = exp + digits;
  }
  return pos;
}

std::optional<NumberLiteral> parse_number(std::string_view text) {
  if (text.empty() || scan_number(text) != text.size()) return std::nullopt;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (text.find_first_of(".eE") == std::string_view::npos) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) return std::nullopt;
    return value;
  }
  double value = 0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return value;
}

}  // namespace mtp
