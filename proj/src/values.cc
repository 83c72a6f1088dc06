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

#include "mtp/values.h"

#include "mtp/literals.h"
#include "mtp/registry.h"

namespace mtp {

const Value* Value::Object::field(std::string_view name) const {
  for (const auto& [n, v] : fields) {
    if (n == name) return &v;
  }
  return nullptr;
}

Value Value::list(List elements) {
  return Value(Data(std::make_shared<const List>(std::move(elements))));
}

Value Value::map(Map entries) {
  return Value(Data(std::make_shared<const Map>(std::move(entries))));
}

Value Value::object(std::string class_name,
                    std::vector<std::pair<std::string, Value>> fields) {
  return Value(Data(std::make_shared<const Object>(
      Object{std::move(class_name), std::move(fields)})));
}

Value Value::from_literal(const Literal& lit) {
  return std::visit([](const auto& v) { return Value(Data(v)); }, lit);
}

bool operator==(const Value& a, const Value& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Value::Kind::Int: return a.as_int() == b.as_int();
    case Value::Kind::Float: return a.as_float() == b.as_float();
    case Value::Kind::Str: return a.as_str() == b.as_str();
    case Value::Kind::Bool: return a.as_bool() == b.as_bool();
    case Value::Kind::List: return a.as_list() == b.as_list();
    case Value::Kind::Map: return a.as_map() == b.as_map();
    case Value::Kind::Object: return a.as_object() == b.as_object();
  }
  return false;
}

// ---- schemas ----

SchemaTable::SchemaTable(std::span<const TypeSchema> schemas) {
  for (const TypeSchema& s : schemas) add(s);
}

SchemaTable SchemaTable::from_registry(const SemanticRegistry& registry) {
  SchemaTable table;
  for (const auto& [id, fields] : registry.class_fields()) {
    TypeSchema schema{id.name, {}};
    for (const FieldDecl& f : fields) schema.fields.push_back({f.name, f.type});
    table.add(std::move(schema));
  }
  return table;
}

const TypeSchema* SchemaTable::find(std::string_view name) const {
  auto it = schemas_.find(name);
  return it == schemas_.end() ? nullptr : &it->second;
}

void SchemaTable::add(TypeSchema schema) {
  std::string name = schema.name;
  schemas_.emplace(std::move(name), std::move(schema));
}

// ---- checking ----

namespace {

bool primitive_matches(const Value& v, PrimitiveType p) {
  switch (p) {
    case PrimitiveType::Int: return v.is(Value::Kind::Int);
    case PrimitiveType::Float: return v.is(Value::Kind::Float);
    case PrimitiveType::Str: return v.is(Value::Kind::Str);
    case PrimitiveType::Bool: return v.is(Value::Kind::Bool);
  }
  return false;
}

class Checker {
 public:
  explicit Checker(const SchemaTable& schemas) : schemas_(schemas) {}

  void check(const Value& v, const TypeExpr& t, const std::string& path) {
    switch (t.kind) {
      case TypeExpr::Kind::Primitive:
        if (!primitive_matches(v, t.primitive)) mismatch(path, t, v);
        return;
      case TypeExpr::Kind::List: {
        if (!v.is(Value::Kind::List)) return mismatch(path, t, v);
        const Value::List& items = v.as_list();
        for (std::size_t i = 0; i < items.size(); ++i) {
          check(items[i], t.element(), path + "[" + std::to_string(i) + "]");
        }
        return;
      }
      case TypeExpr::Kind::Map: {
        if (!v.is(Value::Kind::Map)) return mismatch(path, t, v);
        const Value::Map& entries = v.as_map();
        for (std::size_t i = 0; i < entries.size(); ++i) {
          check(entries[i].first, t.key(),
                path + ".keys[" + std::to_string(i) + "]");
          check(entries[i].second, t.value(),
                path + "[" + render_value(entries[i].first) + "]");
        }
        return;
      }
      case TypeExpr::Kind::Named: {
        if (!v.is(Value::Kind::Object) || v.as_object().class_name != t.name) {
          return mismatch(path, t, v);
        }
        const TypeSchema* schema = schemas_.find(t.name);
        if (!schema) {
          report_.mismatches.push_back({path, t.name, "unknown class " + t.name});
          return;
        }
        const Value::Object& obj = v.as_object();
        for (const Slot& f : schema->fields) {
          const std::string field_path = path + "." + f.name;
          if (const Value* fv = obj.field(f.name)) {
            check(*fv, f.type, field_path);
          } else {
            report_.mismatches.push_back({field_path, f.type.to_string(), "nothing"});
          }
        }
        for (const auto& [name, fv] : obj.fields) {
          if (!schema->find_field(name)) {
            report_.mismatches.push_back(
                {path + "." + name, "no such field", summarize_value(fv)});
          }
        }
        return;
      }
    }
  }

  TypeCheckReport take() {
    report_.ok = report_.mismatches.empty();
    return std::move(report_);
  }

 private:
  void mismatch(const std::string& path, const TypeExpr& t, const Value& v) {
    report_.mismatches.push_back({path, t.to_string(), summarize_value(v)});
  }

  const SchemaTable& schemas_;
  TypeCheckReport report_;
};

}  // namespace

TypeCheckReport check_type(const Value& value, const TypeExpr& type,
                           const SchemaTable& schemas) {
  Checker checker(schemas);
  checker.check(value, type, "$");
  return checker.take();
}

// ---- rendering ----

std::string render_value(const Value& value) {
  switch (value.kind()) {
    case Value::Kind::Int: return std::to_string(value.as_int());
    case Value::Kind::Float: return format_float(value.as_float());
    case Value::Kind::Str: return quote_string(value.as_str());
    case Value::Kind::Bool: return value.as_bool() ? "true" : "false";
    case Value::Kind::List: {
      std::string out = "[";
      const Value::List& items = value.as_list();
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += render_value(items[i]);
      }
      return out + "]";
    }
    case Value::Kind::Map: {
      std::string out = "{";
      const Value::Map& entries = value.as_map();
      for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i) out += ", ";
        out += render_value(entries[i].first) + ": " +
               render_value(entries[i].second);
      }
      return out + "}";
    }
    case Value::Kind::Object: {
      const Value::Object& obj = value.as_object();
      std::string out = obj.class_name + "(";
      for (std::size_t i = 0; i < obj.fields.size(); ++i) {
        if (i) out += ", ";
        out += obj.fields[i].first + "=" + render_value(obj.fields[i].second);
      }
      return out + ")";
    }
  }
  return "?";
}

std::string summarize_value(const Value& value) {
  switch (value.kind()) {
    case Value::Kind::Int: return "int " + render_value(value);
    case Value::Kind::Float: return "float " + render_value(value);
    case Value::Kind::Bool: return "bool " + render_value(value);
    case Value::Kind::Str: {
      std::string text = render_value(value);
      if (text.size() > 40) text = text.substr(0, 37) + "...";
      return "str " + text;
    }
    case Value::Kind::List:
      return "list of " + std::to_string(value.as_list().size());
    case Value::Kind::Map:
      return "map of " + std::to_string(value.as_map().size());
    case Value::Kind::Object: return value.as_object().class_name + " object";
  }
  return "?";
}

}  // namespace mtp
