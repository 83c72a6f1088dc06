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

#include "mtp/ast.h"

#include "mtp/literals.h"

namespace mtp {

std::string_view primitive_name(PrimitiveType p) {
  switch (p) {
    case PrimitiveType::Int: return "int";
    case PrimitiveType::Float: return "float";
    case PrimitiveType::Str: return "str";
    case PrimitiveType::Bool: return "bool";
  }
  return "?";
}

TypeExpr TypeExpr::prim(PrimitiveType p, SourceLoc loc) {
  TypeExpr t;
  t.kind = Kind::Primitive;
  t.primitive = p;
  t.loc = loc;
  return t;
}

TypeExpr TypeExpr::named(std::string name, SourceLoc loc) {
  TypeExpr t;
  t.kind = Kind::Named;
  t.name = std::move(name);
  t.loc = loc;
  return t;
}

TypeExpr TypeExpr::list_of(TypeExpr element, SourceLoc loc) {
  TypeExpr t;
  t.kind = Kind::List;
  t.args.push_back(std::move(element));
  t.loc = loc;
  return t;
}

TypeExpr TypeExpr::map_of(TypeExpr key, TypeExpr value, SourceLoc loc) {
  TypeExpr t;
  t.kind = Kind::Map;
  t.args.push_back(std::move(key));
  t.args.push_back(std::move(value));
  t.loc = loc;
  return t;
}

std::string TypeExpr::to_string() const {
  switch (kind) {
    case Kind::Primitive: return std::string(primitive_name(primitive));
    case Kind::Named: return name;
    case Kind::List: return "list[" + element().to_string() + "]";
    case Kind::Map:
      return "map[" + key().to_string() + ", " + value().to_string() + "]";
  }
  return "?";
}

bool operator==(const TypeExpr& a, const TypeExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TypeExpr::Kind::Primitive: return a.primitive == b.primitive;
    case TypeExpr::Kind::Named: return a.name == b.name;
    default: return a.args == b.args;
  }
}

std::string literal_to_source(const Literal& lit) {
  struct Visitor {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_float(v); }
    std::string operator()(const std::string& v) const {
      return quote_string(v);
    }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{}, lit);
}

std::string_view binary_op_text(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
  }
  return "?";
}

const FieldDecl* ClassDecl::find_field(std::string_view field) const {
  for (const FieldDecl& f : fields) {
    if (f.name == field) return &f;
  }
  return nullptr;
}

const FuncDecl* ClassDecl::find_method(std::string_view method) const {
  for (const FuncDecl& m : methods) {
    if (m.name == method) return &m;
  }
  return nullptr;
}

const std::string& decl_name(const Decl& d) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; },
                    d);
}

SourceLoc decl_loc(const Decl& d) {
  return std::visit([](const auto& x) { return x.loc; }, d);
}

const ClassDecl* ModuleAST::find_class(std::string_view class_name) const {
  for (const Decl& d : decls) {
    if (auto* c = std::get_if<ClassDecl>(&d); c && c->name == class_name) {
      return c;
    }
  }
  return nullptr;
}

const FuncDecl* ModuleAST::find_function(std::string_view func_name) const {
  for (const Decl& d : decls) {
    if (auto* f = std::get_if<FuncDecl>(&d); f && f->name == func_name) {
      return f;
    }
  }
  return nullptr;
}

namespace {

void clear(TypeExpr& t) {
  t.loc = {};
  for (TypeExpr& a : t.args) clear(a);
}

void clear(ByClause& by) {
  by.loc = {};
  for (HyperParam& h : by.hyperparams) h.loc = {};
}

void clear(Expr& e);
void clear(Block& b);

void clear_args(std::vector<Argument>& args) {
  for (Argument& a : args) {
    a.name_loc = {};
    clear(*a.value);
  }
}

void clear(Expr& e) {
  e.loc = {};
  std::visit(
      [](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CallExpr>) {
          clear_args(n.args);
          if (n.by) clear(*n.by);
        } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
          clear(*n.receiver);
          n.method_loc = {};
          clear_args(n.args);
        } else if constexpr (std::is_same_v<T, AttributeExpr>) {
          clear(*n.object);
          n.attribute_loc = {};
        } else if constexpr (std::is_same_v<T, ListExpr>) {
          for (Expr& x : n.elements) clear(x);
        } else if constexpr (std::is_same_v<T, MapExpr>) {
          for (MapEntryExpr& x : n.entries) {
            clear(*x.key);
            clear(*x.value);
          }
        } else if constexpr (std::is_same_v<T, UnaryExpr>) {
          clear(*n.operand);
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          clear(*n.lhs);
          clear(*n.rhs);
        }
      },
      e.node);
}

void clear(Stmt& s) {
  s.loc = {};
  std::visit(
      [](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LetStmt>) {
          clear(n.value);
        } else if constexpr (std::is_same_v<T, ExprStmt>) {
          clear(n.expr);
        } else if constexpr (std::is_same_v<T, ReturnStmt> ||
                             std::is_same_v<T, PrintStmt>) {
          clear(n.value);
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          clear(n.condition);
          clear(n.then_block);
          if (n.else_block) clear(*n.else_block);
        }
      },
      s.node);
}

void clear(Block& b) {
  for (Stmt& s : b.statements) clear(s);
}

void clear(FuncDecl& f) {
  f.loc = {};
  for (Param& p : f.params) {
    p.loc = {};
    clear(p.type);
  }
  clear(f.return_type);
  if (f.body) clear(*f.body);
  if (f.by) clear(*f.by);
}

}  // namespace

void clear_locations(ModuleAST& module) {
  for (Import& i : module.imports) i.loc = {};
  for (Decl& d : module.decls) {
    if (auto* c = std::get_if<ClassDecl>(&d)) {
      c->loc = {};
      for (FieldDecl& f : c->fields) {
        f.loc = {};
        clear(f.type);
      }
      for (FuncDecl& m : c->methods) clear(m);
    } else {
      clear(std::get<FuncDecl>(d));
    }
  }
  for (Stmt& s : module.statements) clear(s);
}

}  // namespace mtp
