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

#include "mtp/lexer.h"

#include <array>

#include "mtp/errors.h"
#include "mtp/literals.h"

namespace mtp {

namespace {

constexpr std::array<std::string_view, 15> kKeywords = {
    "import", "class", "def", "by",  "let",   "print", "return", "if",
    "else",   "true",  "false", "int", "float", "str",   "bool",
};

// Longest first so "->" wins over "-".
constexpr std::array<std::string_view, 21> kPunct = {
    "->", "==", "!=", "<=", ">=", "(", ")", "{", "}", "[", "]",
    ",",  ":",  ".",  "=",  "+",  "-", "*", "/", "<", ">",
};

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    for (;;) {
      skip_trivia();
      if (pos_ >= src_.size()) {
        tokens.push_back({TokenKind::EndOfInput, "", loc(), pos_});
        return tokens;
      }
      tokens.push_back(next());
    }
  }

 private:
  SourceLoc loc() const { return {line_, column_}; }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      char c = src_[pos_++];
      if (c == '\n') {
        ++line_;
        column_ = 1;
      } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
        ++column_;
      }
    }
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  Token next() {
    const SourceLoc start = loc();
    const std::size_t begin = pos_;
    const char c = src_[pos_];

    if (is_ident_start(c)) {
      std::size_t end = pos_;
      while (end < src_.size() && is_ident_char(src_[end])) ++end;
      std::string word(src_.substr(begin, end - begin));
      advance(end - begin);
      TokenKind kind =
          is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier;
      return {kind, std::move(word), start, begin};
    }

    if (c >= '0' && c <= '9') {
      std::size_t len = scan_number(src_.substr(pos_));
      std::string_view text = src_.substr(pos_, len);
      auto number = parse_number(text);
      if (!number) throw LexError(start, "number literal out of range");
      if (pos_ + len < src_.size() && is_ident_char(src_[pos_ + len])) {
        throw LexError(start, "malformed number literal");
      }
      advance(len);
      TokenKind kind = std::holds_alternative<std::int64_t>(*number)
                           ? TokenKind::IntLiteral
                           : TokenKind::FloatLiteral;
      return {kind, std::string(text), start, begin};
    }

    if (c == '"') return string_literal(start, begin);

    for (std::string_view p : kPunct) {
      if (src_.substr(pos_, p.size()) == p) {
        advance(p.size());
        return {TokenKind::Punct, std::string(p), start, begin};
      }
    }

    std::string shown = (static_cast<unsigned char>(c) < 0x20 ||
                         static_cast<unsigned char>(c) >= 0x7F)
                            ? "byte " + std::to_string(static_cast<unsigned char>(c))
                            : std::string("'") + c + "'";
    throw LexError(start, "illegal character " + shown);
  }

  Token string_literal(SourceLoc start, std::size_t begin) {
    std::size_t end = pos_ + 1;
    for (;;) {
      if (end >= src_.size() || src_[end] == '\n') {
        throw LexError(start, "unterminated string literal");
      }
      if (src_[end] == '\\') {
        end += 2;
        continue;
      }
      if (src_[end] == '"') break;
      ++end;
    }
    std::string_view text = src_.substr(begin, end + 1 - begin);
    if (!unescape_string(text.substr(1, text.size() - 2))) {
      throw LexError(start, "unsupported escape in string literal");
    }
    advance(text.size());
    return {TokenKind::StringLiteral, std::string(text), start, begin};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

}  // namespace

bool is_keyword(std::string_view word) {
  for (std::string_view k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

std::vector<Token> tokenize(std::string_view source) {
  return Lexer(source).run();
}

std::string describe_token(const Token& token) {
  switch (token.kind) {
    case TokenKind::EndOfInput: return "end of input";
    case TokenKind::Identifier: return "identifier '" + token.lexeme + "'";
    case TokenKind::Keyword: return "keyword '" + token.lexeme + "'";
    case TokenKind::StringLiteral: return "string " + token.lexeme;
    case TokenKind::IntLiteral:
    case TokenKind::FloatLiteral: return "number " + token.lexeme;
    case TokenKind::Punct: return "'" + token.lexeme + "'";
  }
  return token.lexeme;
}

}  // namespace mtp
