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
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mtp/ast.h"
#include "mtp/registry.h"

namespace mtp {

enum class CallSiteKind { FunctionDef, MethodDef, ObjectInit };

// "function" | "method" | "init", as used in the serialized form.
std::string_view call_site_kind_name(CallSiteKind kind);

struct Slot {
  std::string name;
  TypeExpr type;

  bool operator==(const Slot&) const = default;
};

// A named record type with its fields in declaration order.
struct TypeSchema {
  std::string name;
  std::vector<Slot> fields;

  const Slot* find_field(std::string_view field) const;

  // "Name(field: type, ...)"
  std::string to_string() const;

  bool operator==(const TypeSchema&) const = default;
};

// Everything the runtime needs at one `by` site.
struct MtirEntry {
  std::string site_id;  // module:line:column of the `by` keyword
  CallSiteKind kind = CallSiteKind::FunctionDef;
  std::string subject;  // f | C.mth | C
  // Parameters, or for ObjectInit the provided attribute slots.
  std::vector<Slot> params;
  // A single "return" slot, or for ObjectInit the missing attributes.
  std::vector<Slot> outputs;
  std::optional<std::string> receiver;  // MethodDef: the owning class
  std::string model;
  std::map<std::string, Literal> hyperparams;
  std::vector<TypeSchema> types;  // type closure, first-reached order

  // The type the model must produce: the return type, or for ObjectInit the
  // class being initialized.
  TypeExpr expected_output() const;

  bool operator==(const MtirEntry&) const = default;
};

struct MtirMap {
  std::map<std::string, MtirEntry> entries;

  const MtirEntry* find(std::string_view site_id) const;

  bool operator==(const MtirMap&) const = default;
};

struct CallSite {
  std::string site_id;
  CallSiteKind kind;
  std::string module;
  // FuncDecl for FunctionDef/MethodDef, CallExpr for ObjectInit.
  std::variant<const FuncDecl*, const CallExpr*> node;
  const ClassDecl* owner = nullptr;  // MethodDef only
  SourceLoc node_loc;                // ObjectInit: callee location
};

// Every ByClause in the program, in module order; declarations before
// statements, source order within each.
std::vector<CallSite> collect_by_callsites(std::span<const ModuleAST> modules);

std::string make_site_id(std::string_view module, SourceLoc by_loc);

// Schema of `type` (when it is a class) plus every class reachable through
// fields, list elements and map keys/values, depth-first, skipping classes
// already in `visited`. Throws NameError for unknown names.
std::vector<TypeSchema> extract_type_definition(const TypeExpr& type,
                                                const SemanticRegistry& registry,
                                                std::string_view module,
                                                std::set<SymbolId>& visited);

// One entry per `by` site. Throws SiteError for malformed sites and
// NameError (annotated with the site) for unresolved types.
MtirMap build_mtir(std::span<const ModuleAST> modules,
                   const SemanticRegistry& registry);

// Canonical JSON: sorted entry keys, fixed field order, trailing newline.
std::string serialize_mtir(const MtirMap& map);

// Throws FormatError.
MtirMap deserialize_mtir(std::string_view text);

}  // namespace mtp
