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
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mtp/ast.h"
#include "mtp/mtir.h"

namespace mtp {

class SemanticRegistry;

// Immutable runtime value. Lists, maps and objects share their payload on
// copy; equality is structural.
class Value {
 public:
  using List = std::vector<Value>;
  using Map = std::vector<std::pair<Value, Value>>;  // insertion order
  struct Object {
    std::string class_name;
    std::vector<std::pair<std::string, Value>> fields;  // declaration order

    const Value* field(std::string_view name) const;
    bool operator==(const Object&) const = default;
  };

  enum class Kind { Int, Float, Str, Bool, List, Map, Object };

  Value() : data_(std::int64_t{0}) {}

  static Value integer(std::int64_t v) { return Value(Data(v)); }
  static Value floating(double v) { return Value(Data(v)); }
  static Value string(std::string v) { return Value(Data(std::move(v))); }
  static Value boolean(bool v) { return Value(Data(v)); }
  static Value list(List elements);
  static Value map(Map entries);
  static Value object(std::string class_name,
                      std::vector<std::pair<std::string, Value>> fields);
  static Value from_literal(const Literal& lit);

  Kind kind() const { return static_cast<Kind>(data_.index()); }
  bool is(Kind k) const { return kind() == k; }

  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  double as_float() const { return std::get<double>(data_); }
  const std::string& as_str() const { return std::get<std::string>(data_); }
  bool as_bool() const { return std::get<bool>(data_); }
  const List& as_list() const { return *std::get<std::shared_ptr<const List>>(data_); }
  const Map& as_map() const { return *std::get<std::shared_ptr<const Map>>(data_); }
  const Object& as_object() const {
    return *std::get<std::shared_ptr<const Object>>(data_);
  }

  friend bool operator==(const Value& a, const Value& b);

 private:
  using Data = std::variant<std::int64_t, double, std::string, bool,
                            std::shared_ptr<const List>,
                            std::shared_ptr<const Map>,
                            std::shared_ptr<const Object>>;
  explicit Value(Data d) : data_(std::move(d)) {}

  Data data_;
};

// Class name -> schema, consulted for Named types during checking and output
// parsing. Built from an entry's type closure or from the whole registry.
class SchemaTable {
 public:
  SchemaTable() = default;
  explicit SchemaTable(std::span<const TypeSchema> schemas);
  static SchemaTable from_registry(const SemanticRegistry& registry);

  const TypeSchema* find(std::string_view name) const;
  void add(TypeSchema schema);

 private:
  std::map<std::string, TypeSchema, std::less<>> schemas_;
};

struct TypeMismatch {
  std::string path;      // "$", "$.dob", "$[1]", ...
  std::string expected;  // type text, or "no such field"
  std::string found;     // value summary, or "nothing"

  bool operator==(const TypeMismatch&) const = default;
};

struct TypeCheckReport {
  bool ok = true;
  std::vector<TypeMismatch> mismatches;
};

// Structural check: primitives by tag (no int/float coercion), lists and
// maps element-wise, objects by class name and fields (missing and extra
// fields are mismatches).
TypeCheckReport check_type(const Value& value, const TypeExpr& type,
                           const SchemaTable& schemas);

// Constructor-expression text: literals, [a, b], {k: v}, Class(f=v, ...).
std::string render_value(const Value& value);

// Short description for diagnostics, e.g. `int 5` or `Person object`.
std::string summarize_value(const Value& value);

}  // namespace mtp
