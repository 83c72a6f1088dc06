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

#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mtp/ast.h"
#include "mtp/mtir.h"
#include "mtp/values.h"

namespace mtp::testing {

inline int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// ---- random class graphs ----

struct ClassGraph {
  int size = 0;
  std::vector<std::vector<int>> refs;  // class -> classes named by its fields
  std::string source;

  static std::string name(int i) { return "K" + std::to_string(i); }
};

// Classes K0..Kn-1 whose fields only name classes with a larger index, so
// the graph is acyclic. Fields use every type constructor.
inline ClassGraph random_acyclic_graph(std::mt19937_64& rng, int max_classes = 12,
                                       int max_fields = 6) {
  ClassGraph g;
  g.size = uniform(rng, 1, max_classes);
  g.refs.resize(g.size);
  static const char* kPrims[] = {"int", "float", "str", "bool"};
  for (int i = 0; i < g.size; ++i) {
    g.source += "class " + ClassGraph::name(i) + " {\n";
    const int fields = uniform(rng, 0, max_fields);
    for (int f = 0; f < fields; ++f) {
      auto leaf = [&]() -> std::string {
        if (i + 1 < g.size && uniform(rng, 0, 1) == 1) {
          int j = uniform(rng, i + 1, g.size - 1);
          g.refs[i].push_back(j);
          return ClassGraph::name(j);
        }
        return kPrims[uniform(rng, 0, 3)];
      };
      std::string type;
      switch (uniform(rng, 0, 3)) {
        case 0: type = leaf(); break;
        case 1: type = "list[" + leaf() + "]"; break;
        case 2: type = std::string("map[") + kPrims[uniform(rng, 0, 3)] + ", " + leaf() + "]"; break;
        default: {
          std::string key = leaf();
          type = "map[" + key + ", list[" + leaf() + "]]";
        }
      }
      g.source += "  f" + std::to_string(f) + ": " + type + "\n";
    }
    g.source += "}\n";
  }
  return g;
}

// Breadth-first reachability over the generator's own edge lists.
inline std::set<std::string> bfs_reachable(const ClassGraph& g, int root) {
  std::set<int> seen{root};
  std::deque<int> queue{root};
  while (!queue.empty()) {
    int c = queue.front();
    queue.pop_front();
    for (int next : g.refs[c]) {
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  std::set<std::string> names;
  for (int c : seen) names.insert(ClassGraph::name(c));
  return names;
}

// ---- random values ----

class ValueGen {
 public:
  explicit ValueGen(std::mt19937_64& rng) : rng_(rng) {}

  TypeExpr type(int depth) {
    const int choice = depth == 0 ? 0 : uniform(rng_, 0, 4);
    switch (choice) {
      case 1: return TypeExpr::list_of(type(depth - 1));
      case 2: return TypeExpr::map_of(primitive(), type(depth - 1));
      case 3: return new_class(depth);
      case 4: {
        std::vector<std::size_t> fits;
        for (std::size_t i = 0; i < heights_.size(); ++i) {
          if (heights_[i] <= depth) fits.push_back(i);
        }
        if (fits.empty()) return new_class(depth);
        return TypeExpr::named(schemas_[fits[uniform(rng_, 0, int(fits.size()) - 1)]].name);
      }
      default: return primitive();
    }
  }

  Value value(const TypeExpr& t) {
    switch (t.kind) {
      case TypeExpr::Kind::Primitive: return primitive_value(t.primitive);
      case TypeExpr::Kind::List: {
        Value::List items;
        const int n = uniform(rng_, 0, 6);
        for (int i = 0; i < n; ++i) items.push_back(value(t.element()));
        return Value::list(std::move(items));
      }
      case TypeExpr::Kind::Map: {
        Value::Map entries;
        const int n = uniform(rng_, 0, 6);
        for (int i = 0; i < n; ++i) {
          Value k = value(t.key());
          bool dup = false;
          for (const auto& e : entries) dup = dup || e.first == k;
          if (!dup) entries.emplace_back(std::move(k), value(t.value()));
        }
        return Value::map(std::move(entries));
      }
      case TypeExpr::Kind::Named: {
        const TypeSchema& s = *schema(t.name);
        std::vector<std::pair<std::string, Value>> fields;
        for (const Slot& f : s.fields) fields.emplace_back(f.name, value(f.type));
        return Value::object(s.name, std::move(fields));
      }
    }
    return Value();
  }

  SchemaTable table() const { return SchemaTable(schemas_); }
  const std::vector<TypeSchema>& schemas() const { return schemas_; }

  std::string string() {
    static const std::vector<std::string> kPieces = {
        "a", "z", "Q", " ", "\"", "\\", "\n", "\t", "(", ")", ",", "=", "[", "]",
        "{", "}", ":", "7", "-", ".", "\xc3\xa9", "\xe2\x82\xac", "#", "by"};
    std::string out;
    const int n = uniform(rng_, 0, 12);
    for (int i = 0; i < n; ++i) out += kPieces[uniform(rng_, 0, int(kPieces.size()) - 1)];
    return out;
  }

  double floating() {
    switch (uniform(rng_, 0, 3)) {
      case 0: return std::uniform_real_distribution<double>(-1e6, 1e6)(rng_);
      case 1: return double(uniform(rng_, -1000, 1000));
      case 2: return uniform(rng_, 0, 1) ? 0.1 : -0.0;
      default:
        for (;;) {
          double d = std::bit_cast<double>(rng_());
          if (std::isfinite(d)) return d;
        }
    }
  }

  std::int64_t integer() {
    switch (uniform(rng_, 0, 2)) {
      case 0: return uniform(rng_, -100, 100);
      case 1: return std::int64_t(rng_());
      default:
        return uniform(rng_, 0, 1) ? std::numeric_limits<std::int64_t>::min()
                                   : std::numeric_limits<std::int64_t>::max();
    }
  }

 private:
  TypeExpr primitive() {
    static const PrimitiveType kPrims[] = {PrimitiveType::Int, PrimitiveType::Float,
                                           PrimitiveType::Str, PrimitiveType::Bool};
    return TypeExpr::prim(kPrims[uniform(rng_, 0, 3)]);
  }

  Value primitive_value(PrimitiveType p) {
    switch (p) {
      case PrimitiveType::Int: return Value::integer(integer());
      case PrimitiveType::Float: return Value::floating(floating());
      case PrimitiveType::Str: return Value::string(string());
      case PrimitiveType::Bool: return Value::boolean(uniform(rng_, 0, 1) == 1);
    }
    return Value();
  }

  TypeExpr new_class(int depth) {
    TypeSchema s{"T" + std::to_string(schemas_.size()), {}};
    const int n = uniform(rng_, 0, 6);
    for (int i = 0; i < n; ++i) {
      s.fields.push_back({"a" + std::to_string(i), type(depth - 1)});
    }
    schemas_.push_back(s);
    heights_.push_back(depth);
    return TypeExpr::named(s.name);
  }

  const TypeSchema* schema(const std::string& name) const {
    for (const TypeSchema& s : schemas_) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }

  std::mt19937_64& rng_;
  std::vector<TypeSchema> schemas_;
  std::vector<int> heights_;
};

}  // namespace mtp::testing
