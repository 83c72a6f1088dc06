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
#include <variant>
#include <vector>

#include "mtp/box.h"
#include "mtp/source_loc.h"

namespace mtp {

enum class PrimitiveType { Int, Float, Str, Bool };

std::string_view primitive_name(PrimitiveType p);

// A type as written in source: int | float | str | bool | Name | list[T] |
// map[K, V]. Location is not part of type identity.
struct TypeExpr {
  enum class Kind { Primitive, Named, List, Map };

  Kind kind = Kind::Primitive;
  PrimitiveType primitive = PrimitiveType::Int;
  std::string name;            // Named only
  std::vector<TypeExpr> args;  // List: [element]; Map: [key, value]
  SourceLoc loc;

  static TypeExpr prim(PrimitiveType p, SourceLoc loc = {});
  static TypeExpr named(std::string name, SourceLoc loc = {});
  static TypeExpr list_of(TypeExpr element, SourceLoc loc = {});
  static TypeExpr map_of(TypeExpr key, TypeExpr value, SourceLoc loc = {});

  bool is_primitive() const { return kind == Kind::Primitive; }
  bool is_named() const { return kind == Kind::Named; }
  const TypeExpr& element() const { return args.at(0); }
  const TypeExpr& key() const { return args.at(0); }
  const TypeExpr& value() const { return args.at(1); }

  // Source syntax, e.g. "list[Level]" or "map[str, int]".
  std::string to_string() const;

  friend bool operator==(const TypeExpr& a, const TypeExpr& b);
};

using Literal = std::variant<std::int64_t, double, std::string, bool>;

std::string literal_to_source(const Literal& lit);

struct HyperParam {
  std::string name;
  Literal value;
  SourceLoc loc;

  bool operator==(const HyperParam&) const = default;
};

struct ByClause {
  std::string model_ref;
  std::vector<HyperParam> hyperparams;
  SourceLoc loc;  // location of the `by` keyword

  bool operator==(const ByClause&) const = default;
};

// ---- expressions ----

struct Expr;

enum class BinaryOp { Add, Sub, Mul, Div, Eq, Ne, Lt, Le, Gt, Ge };

std::string_view binary_op_text(BinaryOp op);

struct LiteralExpr {
  Literal value;
  bool operator==(const LiteralExpr&) const = default;
};

struct NameExpr {
  std::string name;
  bool operator==(const NameExpr&) const = default;
};

struct Argument {
  std::optional<std::string> name;  // set for `field=value` arguments
  SourceLoc name_loc;
  Box<Expr> value;
  bool operator==(const Argument&) const = default;
};

// `callee(args)` where callee is a function or class. With a trailing
// ByClause it is an object-initialization `by` site.
struct CallExpr {
  std::string callee;
  std::vector<Argument> args;
  std::optional<ByClause> by;
  bool operator==(const CallExpr&) const = default;
};

struct MethodCallExpr {
  Box<Expr> receiver;
  std::string method;
  SourceLoc method_loc;
  std::vector<Argument> args;
  bool operator==(const MethodCallExpr&) const = default;
};

struct AttributeExpr {
  Box<Expr> object;
  std::string attribute;
  SourceLoc attribute_loc;
  bool operator==(const AttributeExpr&) const = default;
};

struct ListExpr {
  std::vector<Expr> elements;
  bool operator==(const ListExpr&) const = default;
};

struct MapEntryExpr {
  Box<Expr> key;
  Box<Expr> value;
  bool operator==(const MapEntryExpr&) const = default;
};

struct MapExpr {
  std::vector<MapEntryExpr> entries;
  bool operator==(const MapExpr&) const = default;
};

struct UnaryExpr {
  Box<Expr> operand;  // the only unary operator is numeric negation
  bool operator==(const UnaryExpr&) const = default;
};

struct BinaryExpr {
  BinaryOp op;
  Box<Expr> lhs;
  Box<Expr> rhs;
  bool operator==(const BinaryExpr&) const = default;
};

struct Expr {
  using Node = std::variant<LiteralExpr, NameExpr, CallExpr, MethodCallExpr,
                            AttributeExpr, ListExpr, MapExpr, UnaryExpr,
                            BinaryExpr>;
  Node node;
  SourceLoc loc;  // for CallExpr: the callee identifier

  bool operator==(const Expr&) const = default;
};

// ---- statements ----

struct Stmt;

struct Block {
  std::vector<Stmt> statements;
  bool operator==(const Block&) const = default;
};

struct LetStmt {
  std::string name;
  Expr value;
  bool operator==(const LetStmt&) const = default;
};

struct ExprStmt {
  Expr expr;
  bool operator==(const ExprStmt&) const = default;
};

struct ReturnStmt {
  Expr value;
  bool operator==(const ReturnStmt&) const = default;
};

struct PrintStmt {
  Expr value;
  bool operator==(const PrintStmt&) const = default;
};

struct IfStmt {
  Expr condition;
  Block then_block;
  std::optional<Block> else_block;
  bool operator==(const IfStmt&) const = default;
};

struct Stmt {
  using Node = std::variant<LetStmt, ExprStmt, ReturnStmt, PrintStmt, IfStmt>;
  Node node;
  SourceLoc loc;

  bool operator==(const Stmt&) const = default;
};

// ---- declarations ----

struct Param {
  std::string name;
  TypeExpr type;
  SourceLoc loc;
  bool operator==(const Param&) const = default;
};

// Exactly one of `body` and `by` is set.
struct FuncDecl {
  std::string name;
  std::vector<Param> params;
  TypeExpr return_type;
  std::optional<Block> body;
  std::optional<ByClause> by;
  SourceLoc loc;
  bool operator==(const FuncDecl&) const = default;
};

struct FieldDecl {
  std::string name;
  TypeExpr type;
  SourceLoc loc;
  bool operator==(const FieldDecl&) const = default;
};

struct ClassDecl {
  std::string name;
  std::vector<FieldDecl> fields;
  std::vector<FuncDecl> methods;
  SourceLoc loc;

  const FieldDecl* find_field(std::string_view field) const;
  const FuncDecl* find_method(std::string_view method) const;

  bool operator==(const ClassDecl&) const = default;
};

using Decl = std::variant<ClassDecl, FuncDecl>;

const std::string& decl_name(const Decl& d);
SourceLoc decl_loc(const Decl& d);

struct Import {
  std::string module;
  SourceLoc loc;
  bool operator==(const Import&) const = default;
};

struct ModuleAST {
  std::string name;
  std::vector<Import> imports;
  std::vector<Decl> decls;
  std::vector<Stmt> statements;  // top-level statements, in order

  const ClassDecl* find_class(std::string_view name) const;
  const FuncDecl* find_function(std::string_view name) const;

  bool operator==(const ModuleAST&) const = default;
};

// Zeroes every location in the tree so two parses of differently laid out
// text can be compared structurally.
void clear_locations(ModuleAST& module);

}  // namespace mtp
