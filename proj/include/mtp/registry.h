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

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mtp/ast.h"

namespace mtp {

enum class SymbolKind { Class, Function, Method, Field, Variable };

std::string_view symbol_kind_name(SymbolKind kind);

// Identity of a definition. `owner` qualifies members (the class name for
// fields and methods) and variables (the enclosing function, "Class.method",
// or empty at module top level).
struct SymbolId {
  std::string module;
  std::string owner;
  std::string name;
  SymbolKind kind = SymbolKind::Variable;

  std::string to_string() const;

  auto operator<=>(const SymbolId&) const = default;
};

struct Signature {
  std::vector<Param> params;
  TypeExpr return_type;

  bool operator==(const Signature&) const = default;
};

struct Definition {
  SymbolId id;
  std::optional<TypeExpr> declared_type;  // fields, params, typed variables
  std::optional<Signature> signature;     // functions and methods
  SourceLoc loc;

  bool operator==(const Definition&) const = default;
};

struct Usage {
  std::string module;
  SourceLoc loc;
  SymbolId target;

  bool operator==(const Usage&) const = default;
};

// A TypeExpr with every Named type bound to its class definition.
struct TypeRef {
  enum class Kind { Primitive, Class, List, Map };

  Kind kind = Kind::Primitive;
  PrimitiveType primitive = PrimitiveType::Int;
  SymbolId class_id;  // Class only
  std::vector<TypeRef> args;

  static TypeRef prim(PrimitiveType p);
  static TypeRef of_class(SymbolId id);
  static TypeRef list_of(TypeRef element);
  static TypeRef map_of(TypeRef key, TypeRef value);

  bool is_primitive() const { return kind == Kind::Primitive; }
  bool is_class() const { return kind == Kind::Class; }

  // Back to source syntax with plain class names.
  TypeExpr to_type_expr() const;

  bool operator==(const TypeRef&) const = default;
};

// Codebase-wide symbol store: every definition, every usage linked to its
// definition, and the ordered field list of every class. Immutable once
// built.
class SemanticRegistry {
 public:
  const std::map<SymbolId, Definition>& definitions() const {
    return definitions_;
  }
  const std::vector<Usage>& usages() const { return usages_; }
  const std::map<SymbolId, std::vector<FieldDecl>>& class_fields() const {
    return class_fields_;
  }

  const Definition* find(const SymbolId& id) const;

  // Class or function declared directly in `module`.
  std::optional<SymbolId> find_global(std::string_view module,
                                      std::string_view name) const;

  // Module scope, then each import in declaration order.
  std::optional<SymbolId> resolve_global(std::string_view module,
                                         std::string_view name) const;

  // The definition a usage at (module, loc) links to.
  const SymbolId* target_at(std::string_view module, SourceLoc loc) const;

  const std::vector<FieldDecl>& fields_of(const SymbolId& class_id) const;

  // Binds Named types as seen from `module`; throws NameError.
  TypeRef resolve_type(const TypeExpr& type, std::string_view module) const;

  // Canonical text listing of definitions then usages.
  std::string dump() const;

  bool operator==(const SemanticRegistry&) const = default;

 private:
  friend class RegistryBuilder;

  std::map<SymbolId, Definition> definitions_;
  std::vector<Usage> usages_;
  std::map<SymbolId, std::vector<FieldDecl>> class_fields_;
  std::map<std::string, std::vector<std::string>, std::less<>> imports_;
  std::map<std::pair<std::string, std::string>, SymbolId> globals_;
  std::map<std::pair<std::string, SourceLoc>, std::size_t> usage_index_;
};

// Registers every class, field, method, function, parameter and variable,
// and links every name usage to its definition (lexical scope, then module
// scope, then imports in declaration order). Throws NameError,
// DuplicateError or ImportError.
SemanticRegistry build_registry(std::span<const ModuleAST> modules);

// Named -> class definition; primitives -> primitive marker; list/map ->
// structural wrapper over resolved element types.
TypeRef lookup_type(const SemanticRegistry& registry, const TypeExpr& type,
                    std::string_view module);

}  // namespace mtp
