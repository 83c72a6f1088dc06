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

#include "mtp/mtir.h"

#include <json.hpp>

#include "mtp/errors.h"
#include "mtp/parser.h"

namespace mtp {

std::string_view call_site_kind_name(CallSiteKind kind) {
  switch (kind) {
    case CallSiteKind::FunctionDef: return "function";
    case CallSiteKind::MethodDef: return "method";
    case CallSiteKind::ObjectInit: return "init";
  }
  return "?";
}

const Slot* TypeSchema::find_field(std::string_view field) const {
  for (const Slot& s : fields) {
    if (s.name == field) return &s;
  }
  return nullptr;
}

std::string TypeSchema::to_string() const {
  std::string out = name + "(";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ", ";
    out += fields[i].name + ": " + fields[i].type.to_string();
  }
  return out + ")";
}

TypeExpr MtirEntry::expected_output() const {
  if (kind == CallSiteKind::ObjectInit) return TypeExpr::named(subject);
  return outputs.at(0).type;
}

const MtirEntry* MtirMap::find(std::string_view site_id) const {
  auto it = entries.find(std::string(site_id));
  return it == entries.end() ? nullptr : &it->second;
}

std::string make_site_id(std::string_view module, SourceLoc by_loc) {
  return std::string(module) + ":" + format_loc(by_loc);
}

// ---- collection ----

namespace {

class SiteCollector {
 public:
  explicit SiteCollector(std::vector<CallSite>& out) : out_(out) {}

  void module(const ModuleAST& m) {
    module_ = m.name;
    for (const Decl& d : m.decls) {
      if (const auto* c = std::get_if<ClassDecl>(&d)) {
        for (const FuncDecl& mth : c->methods) function(mth, c);
      } else {
        function(std::get<FuncDecl>(d), nullptr);
      }
    }
    for (const Stmt& s : m.statements) stmt(s);
  }

 private:
  void function(const FuncDecl& f, const ClassDecl* owner) {
    if (f.by) {
      out_.push_back({make_site_id(module_, f.by->loc),
                      owner ? CallSiteKind::MethodDef : CallSiteKind::FunctionDef,
                      module_, &f, owner, f.loc});
    }
    if (f.body) block(*f.body);
  }

  void block(const Block& b) {
    for (const Stmt& s : b.statements) stmt(s);
  }

  void stmt(const Stmt& s) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, LetStmt>) {
            expr(n.value);
          } else if constexpr (std::is_same_v<T, ExprStmt>) {
            expr(n.expr);
          } else if constexpr (std::is_same_v<T, IfStmt>) {
            expr(n.condition);
            block(n.then_block);
            if (n.else_block) block(*n.else_block);
          } else {
            expr(n.value);
          }
        },
        s.node);
  }

  void args(const std::vector<Argument>& list) {
    for (const Argument& a : list) expr(*a.value);
  }

  void expr(const Expr& e) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, CallExpr>) {
            args(n.args);
            if (n.by) {
              out_.push_back({make_site_id(module_, n.by->loc),
                              CallSiteKind::ObjectInit, module_, &n, nullptr,
                              e.loc});
            }
          } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
            expr(*n.receiver);
            args(n.args);
          } else if constexpr (std::is_same_v<T, AttributeExpr>) {
            expr(*n.object);
          } else if constexpr (std::is_same_v<T, ListExpr>) {
            for (const Expr& x : n.elements) expr(x);
          } else if constexpr (std::is_same_v<T, MapExpr>) {
            for (const MapEntryExpr& x : n.entries) {
              expr(*x.key);
              expr(*x.value);
            }
          } else if constexpr (std::is_same_v<T, UnaryExpr>) {
            expr(*n.operand);
          } else if constexpr (std::is_same_v<T, BinaryExpr>) {
            expr(*n.lhs);
            expr(*n.rhs);
          }
        },
        e.node);
  }

  std::vector<CallSite>& out_;
  std::string module_;
};

}  // namespace

std::vector<CallSite> collect_by_callsites(std::span<const ModuleAST> modules) {
  std::vector<CallSite> sites;
  SiteCollector collector(sites);
  for (const ModuleAST& m : modules) collector.module(m);
  return sites;
}

// ---- construction ----

std::vector<TypeSchema> extract_type_definition(const TypeExpr& type,
                                                const SemanticRegistry& registry,
                                                std::string_view module,
                                                std::set<SymbolId>& visited) {
  std::vector<TypeSchema> out;
  auto append = [&](std::vector<TypeSchema> more) {
    for (TypeSchema& s : more) out.push_back(std::move(s));
  };
  switch (type.kind) {
    case TypeExpr::Kind::Primitive: break;
    case TypeExpr::Kind::List:
    case TypeExpr::Kind::Map:
      for (const TypeExpr& a : type.args) {
        append(extract_type_definition(a, registry, module, visited));
      }
      break;
    case TypeExpr::Kind::Named: {
      SymbolId id = registry.resolve_type(type, module).class_id;
      if (!visited.insert(id).second) break;
      TypeSchema schema{id.name, {}};
      const std::vector<FieldDecl>& fields = registry.fields_of(id);
      for (const FieldDecl& f : fields) schema.fields.push_back({f.name, f.type});
      out.push_back(std::move(schema));
      for (const FieldDecl& f : fields) {
        append(extract_type_definition(f.type, registry, id.module, visited));
      }
      break;
    }
  }
  return out;
}

namespace {

std::map<std::string, Literal> hyperparam_map(const ByClause& by) {
  std::map<std::string, Literal> out;
  for (const HyperParam& h : by.hyperparams) out[h.name] = h.value;
  return out;
}

struct ClosureRoot {
  TypeExpr type;
  std::string module;  // scope the type was written in
};

MtirEntry build_entry(const CallSite& site, const SemanticRegistry& registry) {
  MtirEntry entry;
  entry.site_id = site.site_id;
  entry.kind = site.kind;
  std::vector<ClosureRoot> roots;

  if (const auto* fn = std::get_if<const FuncDecl*>(&site.node)) {
    const FuncDecl& f = **fn;
    entry.subject = site.owner ? site.owner->name + "." + f.name : f.name;
    entry.model = f.by->model_ref;
    entry.hyperparams = hyperparam_map(*f.by);
    for (const Param& p : f.params) {
      entry.params.push_back({p.name, p.type});
      roots.push_back({p.type, site.module});
    }
    entry.outputs.push_back({"return", f.return_type});
    roots.push_back({f.return_type, site.module});
    if (site.owner) {
      entry.receiver = site.owner->name;
      roots.push_back({TypeExpr::named(site.owner->name), site.module});
    }
  } else {
    const CallExpr& call = *std::get<const CallExpr*>(site.node);
    const SymbolId* target = registry.target_at(site.module, site.node_loc);
    if (!target || target->kind != SymbolKind::Class) {
      throw SiteError(site.site_id,
                      "'by' on a call of '" + call.callee +
                          "', which is not a class");
    }
    entry.subject = target->name;
    entry.model = call.by->model_ref;
    entry.hyperparams = hyperparam_map(*call.by);

    const std::vector<FieldDecl>& fields = registry.fields_of(*target);
    std::vector<bool> provided(fields.size(), false);
    std::size_t positional = 0;
    for (const Argument& a : call.args) {
      if (!a.name) {
        provided.at(positional++) = true;
        continue;
      }
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i].name != *a.name) continue;
        if (provided[i]) {
          throw SiteError(site.site_id,
                          "field '" + *a.name + "' supplied more than once");
        }
        provided[i] = true;
      }
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      (provided[i] ? entry.params : entry.outputs)
          .push_back({fields[i].name, fields[i].type});
    }
    if (entry.outputs.empty()) {
      throw SiteError(site.site_id, "object initialization of '" +
                                        target->name +
                                        "' by a model supplies every field");
    }
    // The class schema covers both provided and missing attribute types.
    roots.push_back({TypeExpr::named(target->name), target->module});
  }

  std::set<SymbolId> visited;
  try {
    for (const ClosureRoot& root : roots) {
      for (TypeSchema& s :
           extract_type_definition(root.type, registry, root.module, visited)) {
        entry.types.push_back(std::move(s));
      }
    }
  } catch (const NameError& e) {
    throw NameError(e.name, e.module, e.use_loc,
                    "unknown type (needed by by-site " + site.site_id + ")");
  }
  return entry;
}

}  // namespace

MtirMap build_mtir(std::span<const ModuleAST> modules,
                   const SemanticRegistry& registry) {
  MtirMap map;
  for (const CallSite& site : collect_by_callsites(modules)) {
    map.entries.emplace(site.site_id, build_entry(site, registry));
  }
  return map;
}

// ---- serialization ----

namespace {

using ojson = nlohmann::ordered_json;
using json = nlohmann::json;

ojson literal_json(const Literal& lit) {
  return std::visit([](const auto& v) { return ojson(v); }, lit);
}

ojson slots_json(const std::vector<Slot>& slots) {
  ojson arr = ojson::array();
  for (const Slot& s : slots) {
    arr.push_back(ojson{{"name", s.name}, {"type", s.type.to_string()}});
  }
  return arr;
}

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw FormatError(std::nullopt, path + ": " + what);
}

const json& member(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(path, std::string("missing \"") + key + "\"");
  return *it;
}

std::string string_at(const json& obj, const char* key, const std::string& path) {
  const json& v = member(obj, key, path);
  if (!v.is_string()) schema_error(path + "." + key, "expected a string");
  return v.get<std::string>();
}

TypeExpr type_at(const json& obj, const std::string& path) {
  std::string text = string_at(obj, "type", path);
  try {
    return parse_type_text(text);
  } catch (const Error& e) {
    schema_error(path + ".type", "bad type '" + text + "': " + e.what());
  }
}

std::vector<Slot> slots_at(const json& obj, const char* key,
                           const std::string& path) {
  const json& arr = member(obj, key, path);
  if (!arr.is_array()) schema_error(path + "." + key, "expected an array");
  std::vector<Slot> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    std::string p = path + "." + key + "[" + std::to_string(i) + "]";
    out.push_back({string_at(arr[i], "name", p), type_at(arr[i], p)});
  }
  return out;
}

Literal literal_at(const json& v, const std::string& path) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) return v.get<double>();
  if (v.is_string()) return v.get<std::string>();
  schema_error(path, "expected a literal");
}

CallSiteKind kind_from(const std::string& text, const std::string& path) {
  for (CallSiteKind k : {CallSiteKind::FunctionDef, CallSiteKind::MethodDef,
                         CallSiteKind::ObjectInit}) {
    if (call_site_kind_name(k) == text) return k;
  }
  schema_error(path, "unknown kind '" + text + "'");
}

}  // namespace

std::string serialize_mtir(const MtirMap& map) {
  ojson entries = ojson::object();
  for (const auto& [site_id, e] : map.entries) {
    ojson hyper = ojson::object();
    for (const auto& [name, value] : e.hyperparams) hyper[name] = literal_json(value);
    ojson types = ojson::array();
    for (const TypeSchema& s : e.types) {
      types.push_back(ojson{{"name", s.name}, {"fields", slots_json(s.fields)}});
    }
    entries[site_id] = ojson{
        {"kind", call_site_kind_name(e.kind)},
        {"subject", e.subject},
        {"params", slots_json(e.params)},
        {"outputs", slots_json(e.outputs)},
        {"receiver", e.receiver ? ojson(*e.receiver) : ojson(nullptr)},
        {"model", e.model},
        {"hyperparams", std::move(hyper)},
        {"types", std::move(types)},
    };
  }
  ojson doc{{"entries", std::move(entries)}};
  return doc.dump(2) + "\n";
}

MtirMap deserialize_mtir(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw FormatError(e.byte == 0 ? 0 : e.byte - 1, e.what());
  }
  MtirMap map;
  const json& entries = member(doc, "entries", "$");
  if (!entries.is_object()) schema_error("$.entries", "expected an object");
  for (const auto& [site_id, e] : entries.items()) {
    const std::string path = "$.entries[\"" + site_id + "\"]";
    MtirEntry entry;
    entry.site_id = site_id;
    entry.kind = kind_from(string_at(e, "kind", path), path + ".kind");
    entry.subject = string_at(e, "subject", path);
    entry.params = slots_at(e, "params", path);
    entry.outputs = slots_at(e, "outputs", path);
    const json& receiver = member(e, "receiver", path);
    if (receiver.is_string()) {
      entry.receiver = receiver.get<std::string>();
    } else if (!receiver.is_null()) {
      schema_error(path + ".receiver", "expected a string or null");
    }
    entry.model = string_at(e, "model", path);
    const json& hyper = member(e, "hyperparams", path);
    if (!hyper.is_object()) schema_error(path + ".hyperparams", "expected an object");
    for (const auto& [name, value] : hyper.items()) {
      entry.hyperparams[name] = literal_at(value, path + ".hyperparams." + name);
    }
    const json& types = member(e, "types", path);
    if (!types.is_array()) schema_error(path + ".types", "expected an array");
    for (std::size_t i = 0; i < types.size(); ++i) {
      std::string p = path + ".types[" + std::to_string(i) + "]";
      entry.types.push_back(
          {string_at(types[i], "name", p), slots_at(types[i], "fields", p)});
    }
    if (entry.kind != CallSiteKind::ObjectInit && entry.outputs.size() != 1) {
      schema_error(path + ".outputs", "expected exactly one return slot");
    }
    map.entries.emplace(site_id, std::move(entry));
  }
  return map;
}

}  // namespace mtp
