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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mtp/source_loc.h"

namespace mtp {

enum class TokenKind {
  Keyword,
  Identifier,
  IntLiteral,
  FloatLiteral,
  StringLiteral,
  Punct,
  EndOfInput,
};

struct Token {
  TokenKind kind;
  std::string lexeme;  // raw source text (string literals keep quotes/escapes)
  SourceLoc loc;
  std::size_t offset = 0;  // byte offset of the lexeme in the source

  bool is(TokenKind k, std::string_view text) const {
    return kind == k && lexeme == text;
  }
  bool is_keyword(std::string_view text) const {
    return is(TokenKind::Keyword, text);
  }
  bool is_punct(std::string_view text) const {
    return is(TokenKind::Punct, text);
  }
};

// Keywords: import class def by let print return if else true false and the
// primitive type names. `list` and `map` are contextual (fields may be named
// `map`).
bool is_keyword(std::string_view word);

// Splits source into tokens; the result always ends with an EndOfInput token.
// Comments run from `#` to end of line. Throws LexError.
std::vector<Token> tokenize(std::string_view source);

std::string describe_token(const Token& token);

}  // namespace mtp
