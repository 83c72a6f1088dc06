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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "mtp/values.h"

namespace mtp {

enum class FailureKind { Syntax, UnknownClass, MissingField, ExtraField, TypeMismatch };

// "syntax" | "unknown-class" | "missing-field" | "extra-field" | "type-mismatch"
std::string_view failure_kind_name(FailureKind kind);

struct ParseFailure {
  FailureKind kind = FailureKind::Syntax;
  std::string path = "$";
  std::string expected;
  std::string found;

  // "<kind> at <path>: expected <expected>, found <found>"
  std::string diagnostic() const;
};

struct ParseOk {
  Value value;
};

using ParseOutcome = std::variant<ParseOk, ParseFailure>;

// Fields the developer supplied at an object-initialization site. They win
// over whatever the model returns for the same fields and may be omitted
// from the model output.
using ProvidedFields = std::map<std::string, Value, std::less<>>;

// Extracts the first well-formed constructor expression in `text` (prose
// and code fences around it are ignored), conforms it to `expected` and
// type-checks it. Never throws and never evaluates anything beyond the
// closed literal/list/map/constructor grammar.
ParseOutcome parse_typed_output(std::string_view text, const TypeExpr& expected,
                                const SchemaTable& schemas,
                                const ProvidedFields* provided = nullptr);

// Parses exactly one constructor expression spanning all of `text` (modulo
// surrounding whitespace), without type information. Objects keep the field
// order of the text.
std::optional<Value> parse_constructor_expression(std::string_view text);

}  // namespace mtp
