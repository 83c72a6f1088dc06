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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace mtp {

// Quotes `text`, escaping only `\n`, `"` and `\`.
std::string quote_string(std::string_view text);

// Decodes the body of a string literal (without the quotes). Returns nullopt
// on an unsupported escape.
std::optional<std::string> unescape_string(std::string_view body);

// Shortest decimal form that round-trips, always recognizable as a float
// literal (a ".0" suffix is added to integral values).
std::string format_float(double value);

using NumberLiteral = std::variant<std::int64_t, double>;

// Parses an unsigned number literal as produced by format_float or written
// in source (digits, optional fraction, optional exponent). Integers that do
// not fit in int64 yield nullopt.
std::optional<NumberLiteral> parse_number(std::string_view text);

// Length of the number literal starting at text[0], or 0 when there is
// none. Does not consume a trailing '.' that is not followed by a digit.
std::size_t scan_number(std::string_view text);

}  // namespace mtp
