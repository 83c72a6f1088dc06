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

#include "mtp/outparse.h"

#include <charconv>
#include <set>
#include <system_error>

#include "mtp/literals.h"

namespace mtp {

std::string_view failure_kind_name(FailureKind kind) {
  switch (kind) {
    case FailureKind::Syntax: return "syntax";
    case FailureKind::UnknownClass: return "unknown-class";
    case FailureKind::MissingField: return "missing-field";
    case FailureKind::ExtraField: return "extra-field";
    case FailureKind::TypeMismatch: return "type-mismatch";
  }
  return "?";
}

std::string ParseFailure::diagnostic() const {
  return std::string(failure_kind_name(kind)) + " at " + path + ": expected " +
         expected + ", found " + found;
}

namespace {

bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::string excerpt(std::string_view text, std::size_t max = 60) {
  std::string out(text.substr(0, max));
  for (char& c : out) {
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
  }
  if (text.size() > max) out += "...";
  return "`" + out + "`";
}

// Recursive-descent reader for the closed constructor-expression grammar.
class ExprReader {
 public:
  explicit ExprReader(std::string_view text, std::size_t pos = 0)
      : text_(text), pos_(pos) {}

  std::optional<Value> value() {
    skip_ws();
    if (pos_ >= text_.size()) return fail("a value");
    char c = text_[pos_];
    if (c == '"') return string();
    if (c == '-' || is_digit(c)) return number();
    if (c == '[') return list();
    if (c == '{') return map();
    if (is_ident_start(c)) return word();
    return fail("a value");
  }

  std::size_t pos() const { return pos_; }
  bool opened_composite() const { return opened_; }
  std::size_t error_pos() const { return error_pos_; }
  const std::string& error_expected() const { return error_expected_; }

  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r')) {
      ++pos_;
    }
  }

 private:
  std::nullopt_t fail(std::string expected) {
    if (error_expected_.empty()) {
      error_pos_ = pos_;
      error_expected_ = std::move(expected);
    }
    return std::nullopt;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::optional<Value> string() {
    std::size_t end = pos_ + 1;
    while (end < text_.size() && text_[end] != '"' && text_[end] != '\n') {
      end += text_[end] == '\\' ? 2 : 1;
    }
    if (end >= text_.size() || text_[end] != '"') return fail("closing '\"'");
    auto body = unescape_string(text_.substr(pos_ + 1, end - pos_ - 1));
    if (!body) return fail("a string with only \\n, \\\" or \\\\ escapes");
    pos_ = end + 1;
    return Value::string(std::move(*body));
  }

  std::optional<Value> number() {
    std::size_t start = pos_;
    std::size_t digits_at = text_[pos_] == '-' ? pos_ + 1 : pos_;
    std::size_t len = scan_number(text_.substr(digits_at));
    if (len == 0) return fail("a number");
    std::size_t end = digits_at + len;
    if (end < text_.size() && is_ident_char(text_[end])) return fail("a number");
    std::string_view slice = text_.substr(start, end - start);
    const char* first = slice.data();
    const char* last = slice.data() + slice.size();
    if (slice.find_first_of(".eE") == std::string_view::npos) {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc{} || ptr != last) return fail("an int in range");
      pos_ = end;
      return Value::integer(v);
    }
    double v = 0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) return fail("a float in range");
    pos_ = end;
    return Value::floating(v);
  }

  std::optional<Value> list() {
    ++pos_;
    opened_ = true;
    Value::List items;
    if (!accept(']')) {
      do {
        auto v = value();
        if (!v) return std::nullopt;
        items.push_back(std::move(*v));
      } while (accept(','));
      if (!accept(']')) return fail("',' or ']'");
    }
    return Value::list(std::move(items));
  }

  std::optional<Value> map() {
    ++pos_;
    opened_ = true;
    Value::Map entries;
    if (!accept('}')) {
      do {
        skip_ws();
        std::size_t key_pos = pos_;
        auto k = value();
        if (!k) return std::nullopt;
        for (const auto& entry : entries) {
          if (entry.first == *k) {
            pos_ = key_pos;
            return fail("distinct map keys");
          }
        }
        if (!accept(':')) return fail("':'");
        auto v = value();
        if (!v) return std::nullopt;
        entries.emplace_back(std::move(*k), std::move(*v));
      } while (accept(','));
      if (!accept('}')) return fail("',' or '}'");
    }
    return Value::map(std::move(entries));
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::optional<Value> word() {
    std::string name = identifier();
    if (name == "true" || name == "false") {
      if (pos_ < text_.size() && is_ident_char(text_[pos_])) return fail("a value");
      return Value::boolean(name == "true");
    }
    if (!accept('(')) return fail("'(' after class name " + name);
    opened_ = true;
    std::vector<std::pair<std::string, Value>> fields;
    std::set<std::string> seen;
    if (!accept(')')) {
      do {
        skip_ws();
        if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) {
          return fail("field=value argument");
        }
        std::size_t name_pos = pos_;
        std::string field = identifier();
        if (!accept('=')) return fail("'=' after field name " + field);
        if (!seen.insert(field).second) {
          pos_ = name_pos;
          return fail("each field at most once");
        }
        auto v = value();
        if (!v) return std::nullopt;
        fields.emplace_back(std::move(field), std::move(*v));
      } while (accept(','));
      if (!accept(')')) return fail("',' or ')'");
    }
    return Value::object(std::move(name), std::move(fields));
  }

  std::string_view text_;
  std::size_t pos_;
  bool opened_ = false;
  std::size_t error_pos_ = 0;
  std::string error_expected_;
};

bool can_start_expression(std::string_view text, std::size_t i) {
  char c = text[i];
  bool starts = c == '"' || c == '[' || c == '{' || c == '-' || is_digit(c) ||
                is_ident_start(c);
  if (!starts) return false;
  if (c == '"' || c == '[' || c == '{') return true;
  return i == 0 || !is_ident_char(text[i - 1]);
}

struct Extracted {
  std::optional<Value> value;
  ParseFailure failure;  // when !value
};

std::string expected_form(const TypeExpr& t) {
  switch (t.kind) {
    case TypeExpr::Kind::Primitive: return std::string(primitive_name(t.primitive));
    case TypeExpr::Kind::Named: return t.name + "(...) constructor expression";
    case TypeExpr::Kind::List: return "list literal of type " + t.to_string();
    case TypeExpr::Kind::Map: return "map literal of type " + t.to_string();
  }
  return t.to_string();
}

Extracted extract_first(std::string_view text, const TypeExpr& expected) {
  struct Malformed {
    std::size_t start, error_pos;
    std::string expected;
  };
  std::optional<Malformed> malformed;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (!can_start_expression(text, i)) continue;
    ExprReader reader(text, i);
    if (auto v = reader.value()) {
      if (malformed && i > malformed->start && i <= malformed->error_pos) {
        break;
      }
      return {std::move(v), {}};
    }
    if (reader.opened_composite() && !malformed) {
      malformed = Malformed{i, reader.error_pos(), reader.error_expected()};
    }
  }
  if (malformed) {
    std::size_t at = malformed->error_pos;
    return {std::nullopt,
            {FailureKind::Syntax, "$", malformed->expected + " at offset " +
                                           std::to_string(at),
             at < text.size() ? excerpt(text.substr(at), 20) : "end of text"}};
  }
  return {std::nullopt,
          {FailureKind::Syntax, "$", expected_form(expected),
           text.empty() ? "empty output" : excerpt(text)}};
}

class Conformer {
 public:
  explicit Conformer(const SchemaTable& schemas) : schemas_(schemas) {}

  std::optional<Value> conform(const Value& raw, const TypeExpr& t,
                               const std::string& path,
                               const ProvidedFields* provided) {
    switch (t.kind) {
      case TypeExpr::Kind::Primitive: {
        const bool ok = (t.primitive == PrimitiveType::Int && raw.is(Value::Kind::Int)) ||
                        (t.primitive == PrimitiveType::Float && raw.is(Value::Kind::Float)) ||
                        (t.primitive == PrimitiveType::Str && raw.is(Value::Kind::Str)) ||
                        (t.primitive == PrimitiveType::Bool && raw.is(Value::Kind::Bool));
        if (!ok) return mismatch(path, t, raw);
        return raw;
      }
      case TypeExpr::Kind::List: {
        if (!raw.is(Value::Kind::List)) return mismatch(path, t, raw);
        Value::List out;
        const Value::List& items = raw.as_list();
        for (std::size_t i = 0; i < items.size(); ++i) {
          auto v = conform(items[i], t.element(),
                           path + "[" + std::to_string(i) + "]", nullptr);
          if (!v) return std::nullopt;
          out.push_back(std::move(*v));
        }
        return Value::list(std::move(out));
      }
      case TypeExpr::Kind::Map: {
        if (!raw.is(Value::Kind::Map)) return mismatch(path, t, raw);
        Value::Map out;
        const Value::Map& entries = raw.as_map();
        for (std::size_t i = 0; i < entries.size(); ++i) {
          auto k = conform(entries[i].first, t.key(),
                           path + ".keys[" + std::to_string(i) + "]", nullptr);
          if (!k) return std::nullopt;
          auto v = conform(entries[i].second, t.value(),
                           path + "[" + render_value(entries[i].first) + "]",
                           nullptr);
          if (!v) return std::nullopt;
          out.emplace_back(std::move(*k), std::move(*v));
        }
        return Value::map(std::move(out));
      }
      case TypeExpr::Kind::Named: return conform_object(raw, t, path, provided);
    }
    return std::nullopt;
  }

  ParseFailure take_failure() { return std::move(failure_); }

 private:
  std::optional<Value> conform_object(const Value& raw, const TypeExpr& t,
                                      const std::string& path,
                                      const ProvidedFields* provided) {
    if (!raw.is(Value::Kind::Object)) return mismatch(path, t, raw);
    const Value::Object& obj = raw.as_object();
    const TypeSchema* schema = schemas_.find(obj.class_name);
    if (!schema) {
      return fail(FailureKind::UnknownClass, path, t.name,
                  "unknown class " + obj.class_name);
    }
    if (obj.class_name != t.name) return mismatch(path, t, raw);
    for (const auto& [name, value] : obj.fields) {
      if (!schema->find_field(name)) {
        return fail(FailureKind::ExtraField, path + "." + name,
                    "no such field in " + t.name, summarize_value(value));
      }
    }
    std::vector<std::pair<std::string, Value>> fields;
    for (const Slot& f : schema->fields) {
      if (provided) {
        auto it = provided->find(f.name);
        if (it != provided->end()) {
          fields.emplace_back(f.name, it->second);
          continue;
        }
      }
      const std::string field_path = path + "." + f.name;
      const Value* given = obj.field(f.name);
      if (!given) {
        return fail(FailureKind::MissingField, field_path, f.type.to_string(),
                    "nothing");
      }
      auto v = conform(*given, f.type, field_path, nullptr);
      if (!v) return std::nullopt;
      fields.emplace_back(f.name, std::move(*v));
    }
    return Value::object(t.name, std::move(fields));
  }

  std::nullopt_t mismatch(const std::string& path, const TypeExpr& t,
                          const Value& raw) {
    return fail(FailureKind::TypeMismatch, path, t.to_string(),
                summarize_value(raw));
  }

  std::nullopt_t fail(FailureKind kind, std::string path, std::string expected,
                      std::string found) {
    failure_ = {kind, std::move(path), std::move(expected), std::move(found)};
    return std::nullopt;
  }

  const SchemaTable& schemas_;
  ParseFailure failure_;
};

}  // namespace

ParseOutcome parse_typed_output(std::string_view text, const TypeExpr& expected,
                                const SchemaTable& schemas,
                                const ProvidedFields* provided) {
  Extracted extracted = extract_first(text, expected);
  if (!extracted.value) return extracted.failure;

  Conformer conformer(schemas);
  std::optional<Value> value =
      conformer.conform(*extracted.value, expected, "$", provided);
  if (!value) return conformer.take_failure();

  TypeCheckReport report = check_type(*value, expected, schemas);
  if (!report.ok) {
    const TypeMismatch& m = report.mismatches.front();
    return ParseFailure{FailureKind::TypeMismatch, m.path, m.expected, m.found};
  }
  return ParseOk{std::move(*value)};
}

std::optional<Value> parse_constructor_expression(std::string_view text) {
  ExprReader reader(text);
  std::optional<Value> v = reader.value();
  if (!v) return std::nullopt;
  reader.skip_ws();
  if (reader.pos() != text.size()) return std::nullopt;
  return v;
}

}  // namespace mtp
