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

#include "mtp/registry.h"

#include <set>
#include <sstream>

#include "mtp/errors.h"

namespace mtp {

std::string_view symbol_kind_name(SymbolKind kind) {
  switch (kind) {
    case SymbolKind::Class: return "class";
    case SymbolKind::Function: return "function";
    case SymbolKind::Method: return "method";
    case SymbolKind::Field: return "field";
    case SymbolKind::Variable: return "variable";
  }
  return "?";
}

std::string SymbolId::to_string() const {
  std::string out = std::string(symbol_kind_name(kind)) + " " + module + "::";
  if (!owner.empty()) out += owner + ".";
  return out + name;
}

TypeRef TypeRef::prim(PrimitiveType p) {
  TypeRef t;
  t.primitive = p;
  return t;
}

TypeRef TypeRef::of_class(SymbolId id) {
  TypeRef t;
  t.kind = Kind::Class;
  t.class_id = std::move(id);
  return t;
}

TypeRef TypeRef::list_of(TypeRef element) {
  TypeRef t;
  t.kind = Kind::List;
  t.args.push_back(std::move(element));
  return t;
}

TypeRef TypeRef::map_of(TypeRef key, TypeRef value) {
  TypeRef t;
  t.kind = Kind::Map;
  t.args.push_back(std::move(key));
  t.args.push_back(std::move(value));
  return t;
}

TypeExpr TypeRef::to_type_expr() const {
  switch (kind) {
    case Kind::Primitive: return TypeExpr::prim(primitive);
    case Kind::Class: return TypeExpr::named(class_id.name);
    case Kind::List: return TypeExpr::list_of(args[0].to_type_expr());
    case Kind::Map:
      return TypeExpr::map_of(args[0].to_type_expr(), args[1].to_type_expr());
  }
  return {};
}

const Definition* SemanticRegistry::find(const SymbolId& id) const {
  auto it = definitions_.find(id);
  return it == definitions_.end() ? nullptr : &it->second;
}

std::optional<SymbolId> SemanticRegistry::find_global(
    std::string_view module, std::string_view name) const {
  auto it = globals_.find({std::string(module), std::string(name)});
  if (it == globals_.end()) return std::nullopt;
  return it->second;
}

std::optional<SymbolId> SemanticRegistry::resolve_global(
    std::string_view module, std::string_view name) const {
  if (auto local = find_global(module, name)) return local;
  auto imports = imports_.find(module);
  if (imports == imports_.end()) return std::nullopt;
  for (const std::string& imported : imports->second) {
    if (auto found = find_global(imported, name)) return found;
  }
  return std::nullopt;
}

const SymbolId* SemanticRegistry::target_at(std::string_view module,
                                            SourceLoc loc) const {
  auto it = usage_index_.find({std::string(module), loc});
  return it == usage_index_.end() ? nullptr : &usages_[it->second].target;
}

const std::vector<FieldDecl>& SemanticRegistry::fields_of(
    const SymbolId& class_id) const {
  static const std::vector<FieldDecl> kNone;
  auto it = class_fields_.find(class_id);
  return it == class_fields_.end() ? kNone : it->second;
}

TypeRef SemanticRegistry::resolve_type(const TypeExpr& type,
                                       std::string_view module) const {
  switch (type.kind) {
    case TypeExpr::Kind::Primitive: return TypeRef::prim(type.primitive);
    case TypeExpr::Kind::Named: {
      auto id = resolve_global(module, type.name);
      if (!id || id->kind != SymbolKind::Class) {
        throw NameError(type.name, std::string(module), type.loc,
                        "unknown type");
      }
      return TypeRef::of_class(*id);
    }
    case TypeExpr::Kind::List:
      return TypeRef::list_of(resolve_type(type.element(), module));
    case TypeExpr::Kind::Map:
      return TypeRef::map_of(resolve_type(type.key(), module),
                             resolve_type(type.value(), module));
  }
  return {};
}

std::string SemanticRegistry::dump() const {
  std::ostringstream out;
  for (const auto& [id, def] : definitions_) {
    out << "def " << id.to_string() << " @" << format_loc(def.loc);
    if (def.declared_type) out << " : " << def.declared_type->to_string();
    if (def.signature) {
      out << " (";
      for (std::size_t i = 0; i < def.signature->params.size(); ++i) {
        if (i) out << ", ";
        out << def.signature->params[i].name << ": "
            << def.signature->params[i].type.to_string();
      }
      out << ") -> " << def.signature->return_type.to_string();
    }
    out << "\n";
  }
  for (const Usage& u : usages_) {
    out << "use " << u.module << "@" << format_loc(u.loc) << " -> "
        << u.target.to_string() << "\n";
  }
  return out.str();
}

TypeRef lookup_type(const SemanticRegistry& registry, const TypeExpr& type,
                    std::string_view module) {
  return registry.resolve_type(type, module);
}

// ---------------------------------------------------------------------------

class RegistryBuilder {
 public:
  SemanticRegistry build(std::span<const ModuleAST> modules) {
    std::set<std::string> names;
    for (const ModuleAST& m : modules) {
      if (!names.insert(m.name).second) {
        throw DuplicateError(m.name, m.name, {}, "module");
      }
    }
    for (const ModuleAST& m : modules) {
      std::vector<std::string>& imports = reg_.imports_[m.name];
      for (const Import& imp : m.imports) {
        if (!names.count(imp.module)) {
          throw ImportError(imp.module, m.name, "module not in program");
        }
        imports.push_back(imp.module);
      }
      declare_globals(m);
    }
    for (const ModuleAST& m : modules) resolve_module(m);
    return std::move(reg_);
  }

 private:
  struct Binding {
    SymbolId id;
    std::optional<TypeRef> type;
  };

  // Lexical scope chain of one function body (or of module top level).
  struct Scope {
    std::string owner;
    std::vector<std::map<std::string, Binding>> frames;
  };

  void define(Definition def) {
    SymbolId id = def.id;
    SourceLoc loc = def.loc;
    if (!reg_.definitions_.emplace(id, std::move(def)).second) {
      throw DuplicateError(id.name, id.module, loc,
                           std::string(symbol_kind_name(id.kind)));
    }
  }

  void use(const std::string& module, SourceLoc loc, const SymbolId& target) {
    reg_.usage_index_[{module, loc}] = reg_.usages_.size();
    reg_.usages_.push_back({module, loc, target});
  }

  static Signature signature_of(const FuncDecl& f) {
    return {f.params, f.return_type};
  }

  void declare_globals(const ModuleAST& m) {
    for (const Decl& d : m.decls) {
      if (const auto* c = std::get_if<ClassDecl>(&d)) {
        SymbolId cid{m.name, "", c->name, SymbolKind::Class};
        define({cid, std::nullopt, std::nullopt, c->loc});
        reg_.globals_[{m.name, c->name}] = cid;
        reg_.class_fields_[cid] = c->fields;
        for (const FieldDecl& f : c->fields) {
          define({{m.name, c->name, f.name, SymbolKind::Field},
                  f.type,
                  std::nullopt,
                  f.loc});
        }
        for (const FuncDecl& mth : c->methods) {
          define({{m.name, c->name, mth.name, SymbolKind::Method},
                  std::nullopt,
                  signature_of(mth),
                  mth.loc});
        }
      } else {
        const auto& f = std::get<FuncDecl>(d);
        SymbolId fid{m.name, "", f.name, SymbolKind::Function};
        define({fid, std::nullopt, signature_of(f), f.loc});
        reg_.globals_[{m.name, f.name}] = fid;
      }
    }
  }

  // Records usages for each Named type inside `type`.
  TypeRef resolve_type_usages(const TypeExpr& type, const std::string& module) {
    if (type.is_named()) {
      TypeRef ref = reg_.resolve_type(type, module);
      use(module, type.loc, ref.class_id);
      return ref;
    }
    for (const TypeExpr& a : type.args) resolve_type_usages(a, module);
    return reg_.resolve_type(type, module);
  }

  void resolve_module(const ModuleAST& m) {
    module_ = m.name;
    for (const Decl& d : m.decls) {
      if (const auto* c = std::get_if<ClassDecl>(&d)) {
        for (const FieldDecl& f : c->fields) resolve_type_usages(f.type, m.name);
        for (const FuncDecl& mth : c->methods) {
          resolve_function(mth, c->name + "." + mth.name,
                           SymbolId{m.name, "", c->name, SymbolKind::Class});
        }
      } else {
        const auto& f = std::get<FuncDecl>(d);
        resolve_function(f, f.name, std::nullopt);
      }
    }
    Scope top{"", {{}}};
    for (const Stmt& s : m.statements) statement(s, top);
  }

  void resolve_function(const FuncDecl& f, const std::string& owner,
                        const std::optional<SymbolId>& self_class) {
    Scope scope{owner, {{}}};
    for (const Param& p : f.params) {
      TypeRef t = resolve_type_usages(p.type, module_);
      bind(scope, p.name, p.loc, t, p.type);
    }
    resolve_type_usages(f.return_type, module_);
    if (!f.body) return;
    if (self_class) {
      TypeRef self = TypeRef::of_class(*self_class);
      bind(scope, "self", f.loc, self, self.to_type_expr());
    }
    for (const Stmt& s : f.body->statements) statement(s, scope);
  }

  void bind(Scope& scope, const std::string& name, SourceLoc loc,
            std::optional<TypeRef> type, std::optional<TypeExpr> declared) {
    SymbolId id{module_, scope.owner, name, SymbolKind::Variable};
    define({id, std::move(declared), std::nullopt, loc});
    scope.frames.back()[name] = {id, std::move(type)};
  }

  void block(const Block& b, Scope& scope) {
    scope.frames.emplace_back();
    for (const Stmt& s : b.statements) statement(s, scope);
    scope.frames.pop_back();
  }

  void statement(const Stmt& s, Scope& scope) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, LetStmt>) {
            std::optional<TypeRef> t = expr(n.value, scope);
            std::optional<TypeExpr> declared;
            if (t) declared = t->to_type_expr();
            bind(scope, n.name, s.loc, t, declared);
          } else if constexpr (std::is_same_v<T, ExprStmt>) {
            expr(n.expr, scope);
          } else if constexpr (std::is_same_v<T, ReturnStmt> ||
                               std::is_same_v<T, PrintStmt>) {
            expr(n.value, scope);
          } else if constexpr (std::is_same_v<T, IfStmt>) {
            expr(n.condition, scope);
            block(n.then_block, scope);
            if (n.else_block) block(*n.else_block, scope);
          }
        },
        s.node);
  }

  const Binding* lookup_local(const Scope& scope, const std::string& name) {
    for (auto it = scope.frames.rbegin(); it != scope.frames.rend(); ++it) {
      auto found = it->find(name);
      if (found != it->end()) return &found->second;
    }
    return nullptr;
  }

  // Resolves usages in `e` and returns its static type when known (empty
  // list and map literals have none).
  std::optional<TypeRef> expr(const Expr& e, Scope& scope) {
    return std::visit(
        [&](const auto& n) -> std::optional<TypeRef> {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, LiteralExpr>) {
            return literal_type(n.value);
          } else if constexpr (std::is_same_v<T, NameExpr>) {
            if (const Binding* b = lookup_local(scope, n.name)) {
              use(module_, e.loc, b->id);
              return b->type;
            }
            if (reg_.resolve_global(module_, n.name)) {
              throw NameError(n.name, module_, e.loc,
                              "not a value (call it instead)");
            }
            throw NameError(n.name, module_, e.loc);
          } else if constexpr (std::is_same_v<T, CallExpr>) {
            return call(n, e.loc, scope);
          } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
            SymbolId cls = receiver_class(*n.receiver, n.method, n.method_loc,
                                          scope);
            SymbolId mid{cls.module, cls.name, n.method, SymbolKind::Method};
            const Definition* def = reg_.find(mid);
            if (!def) {
              throw NameError(n.method, module_, n.method_loc,
                              "unknown method of " + cls.name);
            }
            use(module_, n.method_loc, mid);
            args(n.args, scope, [&](const std::string& name) {
              return SymbolId{cls.module, cls.name + "." + n.method, name,
                              SymbolKind::Variable};
            });
            return reg_.resolve_type(def->signature->return_type, cls.module);
          } else if constexpr (std::is_same_v<T, AttributeExpr>) {
            SymbolId cls = receiver_class(*n.object, n.attribute,
                                          n.attribute_loc, scope);
            SymbolId fid{cls.module, cls.name, n.attribute, SymbolKind::Field};
            const Definition* def = reg_.find(fid);
            if (!def) {
              throw NameError(n.attribute, module_, n.attribute_loc,
                              "unknown field of " + cls.name);
            }
            use(module_, n.attribute_loc, fid);
            return reg_.resolve_type(*def->declared_type, cls.module);
          } else if constexpr (std::is_same_v<T, ListExpr>) {
            std::optional<TypeRef> element;
            for (const Expr& x : n.elements) {
              auto t = expr(x, scope);
              if (!element) element = t;
            }
            if (!element) return std::nullopt;
            return TypeRef::list_of(*element);
          } else if constexpr (std::is_same_v<T, MapExpr>) {
            std::optional<TypeRef> key, value;
            for (const MapEntryExpr& x : n.entries) {
              auto k = expr(*x.key, scope);
              auto v = expr(*x.value, scope);
              if (!key) key = k;
              if (!value) value = v;
            }
            if (!key || !value) return std::nullopt;
            return TypeRef::map_of(*key, *value);
          } else if constexpr (std::is_same_v<T, UnaryExpr>) {
            return expr(*n.operand, scope);
          } else {
            auto lhs = expr(*n.lhs, scope);
            auto rhs = expr(*n.rhs, scope);
            switch (n.op) {
              case BinaryOp::Add:
              case BinaryOp::Sub:
              case BinaryOp::Mul:
              case BinaryOp::Div: return lhs ? lhs : rhs;
              default: return TypeRef::prim(PrimitiveType::Bool);
            }
          }
        },
        e.node);
  }

  static TypeRef literal_type(const Literal& lit) {
    switch (lit.index()) {
      case 0: return TypeRef::prim(PrimitiveType::Int);
      case 1: return TypeRef::prim(PrimitiveType::Float);
      case 2: return TypeRef::prim(PrimitiveType::Str);
      default: return TypeRef::prim(PrimitiveType::Bool);
    }
  }

  SymbolId receiver_class(const Expr& receiver, const std::string& member,
                          SourceLoc member_loc, Scope& scope) {
    std::optional<TypeRef> t = expr(receiver, scope);
    if (!t || !t->is_class()) {
      throw NameError(member, module_, member_loc,
                      "member access on a value that is not an object");
    }
    return t->class_id;
  }

  template <typename ParamId>
  void args(const std::vector<Argument>& list, Scope& scope, ParamId param_id) {
    for (const Argument& a : list) {
      if (a.name) {
        SymbolId target = param_id(*a.name);
        if (!reg_.find(target)) {
          throw NameError(*a.name, module_, a.name_loc, "unknown argument name");
        }
        use(module_, a.name_loc, target);
      }
      expr(*a.value, scope);
    }
  }

  std::optional<TypeRef> call(const CallExpr& n, SourceLoc loc, Scope& scope) {
    auto target = reg_.resolve_global(module_, n.callee);
    if (!target) {
      if (lookup_local(scope, n.callee)) {
        throw NameError(n.callee, module_, loc, "not callable");
      }
      throw NameError(n.callee, module_, loc);
    }
    use(module_, loc, *target);
    if (target->kind == SymbolKind::Class) {
      const SymbolId cls = *target;
      std::size_t positional = 0;
      for (const Argument& a : n.args) positional += a.name ? 0 : 1;
      if (positional > reg_.fields_of(cls).size()) {
        throw NameError(n.callee, module_, loc,
                        "too many positional arguments for class");
      }
      args(n.args, scope, [&](const std::string& name) {
        return SymbolId{cls.module, cls.name, name, SymbolKind::Field};
      });
      return TypeRef::of_class(cls);
    }
    const SymbolId fn = *target;
    args(n.args, scope, [&](const std::string& name) {
      return SymbolId{fn.module, fn.name, name, SymbolKind::Variable};
    });
    const Definition* def = reg_.find(fn);
    return reg_.resolve_type(def->signature->return_type, fn.module);
  }

  SemanticRegistry reg_;
  std::string module_;
};

SemanticRegistry build_registry(std::span<const ModuleAST> modules) {
  return RegistryBuilder().build(modules);
}

}  // namespace mtp
