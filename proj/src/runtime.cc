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

#include "mtp/runtime.h"

#include <algorithm>
#include <stdexcept>

#include "mtp/errors.h"
#include "mtp/outparse.h"
#include "mtp/registry.h"

namespace mtp {

bool is_reserved_hyperparam(std::string_view name) {
  return name == "model" || name == "max_retries" || name == "instructions";
}

int effective_max_retries(const MtirEntry& entry, const RunConfig& config) {
  auto it = entry.hyperparams.find("max_retries");
  if (it == entry.hyperparams.end()) return config.max_retries;
  const auto* n = std::get_if<std::int64_t>(&it->second);
  if (!n || *n < 0 || *n > 100) {
    throw ConfigError(entry.site_id + ": max_retries must be an int in 0..100");
  }
  return static_cast<int>(*n);
}

std::string effective_model_name(const MtirEntry& entry, const RunConfig& config) {
  auto it = entry.hyperparams.find("model");
  if (it != entry.hyperparams.end()) {
    const auto* s = std::get_if<std::string>(&it->second);
    if (!s || s->empty()) {
      throw ConfigError(entry.site_id + ": model must be a nonempty string");
    }
    return *s;
  }
  if (config.model_name && !config.model_name->empty()) return *config.model_name;
  return entry.model;
}

Hyperparams effective_hyperparams(const MtirEntry& entry, const RunConfig& config) {
  Hyperparams out;
  for (const auto& [k, v] : config.default_hyperparams) {
    if (!is_reserved_hyperparam(k)) out[k] = v;
  }
  for (const auto& [k, v] : entry.hyperparams) {
    if (!is_reserved_hyperparam(k)) out[k] = v;
  }
  return out;
}

namespace {

ModelBackend& backend_for(const MtirEntry& entry, const RunConfig& config) {
  auto it = config.backends.find(entry.model);
  if (it == config.backends.end() || !it->second) {
    throw ConfigError(entry.site_id + ": no backend bound for model '" +
                      entry.model + "'");
  }
  return *it->second;
}

void check_inputs(const MtirEntry& entry, const BoundValues& bound,
                  const Value* receiver, const SchemaTable& schemas) {
  if (bound.size() != entry.params.size()) {
    throw ArityError(entry.site_id + ": " + entry.subject + " expects " +
                     std::to_string(entry.params.size()) + " value(s), got " +
                     std::to_string(bound.size()));
  }
  for (std::size_t i = 0; i < bound.size(); ++i) {
    const Slot& slot = entry.params[i];
    if (bound[i].first != slot.name) {
      throw ArityError(entry.site_id + ": expected value for '" + slot.name +
                       "', got '" + bound[i].first + "'");
    }
    TypeCheckReport r = check_type(bound[i].second, slot.type, schemas);
    if (!r.ok) {
      const TypeMismatch& m = r.mismatches.front();
      throw ArgTypeError(entry.site_id, "'" + slot.name + "' at " + m.path +
                                            ": expected " + m.expected +
                                            ", found " + m.found);
    }
  }
  if (entry.kind == CallSiteKind::MethodDef) {
    if (!receiver) throw ArityError(entry.site_id + ": method call without a receiver");
    TypeCheckReport r = check_type(*receiver, TypeExpr::named(*entry.receiver), schemas);
    if (!r.ok) {
      const TypeMismatch& m = r.mismatches.front();
      throw ArgTypeError(entry.site_id, "receiver at " + m.path + ": expected " +
                                            m.expected + ", found " + m.found);
    }
  } else if (receiver) {
    throw ArityError(entry.site_id + ": receiver given for a non-method site");
  }
}

Value run_attempts(const MtirEntry& entry, const BoundValues& bound,
                   const Value* receiver, const ProvidedFields* provided,
                   const RunConfig& config, TokenLedger& ledger) {
  const SchemaTable schemas(entry.types);
  check_inputs(entry, bound, receiver, schemas);
  ModelBackend& backend = backend_for(entry, config);
  const int max_retries = effective_max_retries(entry, config);
  const TypeExpr expected = entry.expected_output();

  CompletionRequest request{synthesize_prompt(entry, bound, receiver),
                            effective_model_name(entry, config),
                            effective_hyperparams(entry, config)};
  std::string diagnostic;
  const int attempts = 1 + max_retries;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    CompletionResult result = backend.complete(request);
    ledger.record(entry.site_id, result);
    ParseOutcome outcome = parse_typed_output(result.text, expected, schemas, provided);
    if (auto* ok = std::get_if<ParseOk>(&outcome)) {
      if (!check_type(ok->value, expected, schemas).ok) {
        throw std::logic_error(entry.site_id + ": parsed value fails its type");
      }
      if (config.on_return) config.on_return(entry, ok->value);
      return std::move(ok->value);
    }
    diagnostic = std::get<ParseFailure>(outcome).diagnostic();
    request.prompt = synthesize_correction_prompt(entry, result.text, diagnostic);
  }
  throw MtpTypeError(entry.site_id, attempts, diagnostic);
}

}  // namespace

Value invoke_model(const MtirEntry& entry, const BoundValues& bound,
                   const Value* receiver, const RunConfig& config,
                   TokenLedger& ledger) {
  return run_attempts(entry, bound, receiver, nullptr, config, ledger);
}

Value eval_object_init_by(const MtirEntry& entry, const BoundValues& provided,
                          const RunConfig& config, TokenLedger& ledger) {
  ProvidedFields fields;
  for (const auto& [name, value] : provided) fields.emplace(name, value);
  return run_attempts(entry, provided, nullptr, &fields, config, ledger);
}

// ---- interpreter ----

namespace {

struct Callable {
  std::string module;
  const FuncDecl* decl = nullptr;
  const ClassDecl* owner = nullptr;
};

struct Frame {
  std::string module;
  std::string where;  // function name for diagnostics
  std::map<std::string, Value, std::less<>> vars;
};

constexpr int kMaxDepth = 400;

class Interpreter {
 public:
  Interpreter(std::span<const ModuleAST> modules, const MtirMap& mtir,
              const RunConfig& config, TokenLedger& ledger)
      : modules_(modules),
        registry_(build_registry(modules)),
        mtir_(mtir),
        config_(config),
        ledger_(ledger),
        schemas_(SchemaTable::from_registry(registry_)) {
    for (const ModuleAST& m : modules_) {
      for (const Decl& d : m.decls) {
        if (const auto* f = std::get_if<FuncDecl>(&d)) {
          callables_[{m.name, "", f->name, SymbolKind::Function}] = {m.name, f, nullptr};
        } else {
          const ClassDecl& c = std::get<ClassDecl>(d);
          classes_[{m.name, "", c.name, SymbolKind::Class}] = &c;
          for (const FuncDecl& mth : c.methods) {
            callables_[{m.name, c.name, mth.name, SymbolKind::Method}] = {m.name, &mth, &c};
          }
        }
      }
    }
    for (const auto& [site_id, entry] : mtir_.entries) backend_for(entry, config_);
  }

  std::string run() {
    if (modules_.empty()) return out_;
    Frame top{modules_[0].name, "<top level>", {}};
    for (const Stmt& s : modules_[0].statements) {
      if (std::holds_alternative<ReturnStmt>(s.node)) {
        throw EvalError(where(top, s.loc), "return outside a function");
      }
      exec(s, top);
    }
    return out_;
  }

  const std::string& output() const { return out_; }

 private:
  static std::string where(const Frame& f, SourceLoc loc) {
    return f.module + ":" + format_loc(loc);
  }

  // ---- statements ----

  std::optional<Value> exec_block(const Block& b, Frame& f) {
    for (const Stmt& s : b.statements) {
      if (auto r = exec(s, f)) return r;
    }
    return std::nullopt;
  }

  std::optional<Value> exec(const Stmt& s, Frame& f) {
    return std::visit(
        [&](const auto& n) -> std::optional<Value> {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, LetStmt>) {
            f.vars.insert_or_assign(n.name, eval(n.value, f));
          } else if constexpr (std::is_same_v<T, ExprStmt>) {
            eval(n.expr, f);
          } else if constexpr (std::is_same_v<T, ReturnStmt>) {
            return eval(n.value, f);
          } else if constexpr (std::is_same_v<T, PrintStmt>) {
            Value v = eval(n.value, f);
            out_ += v.is(Value::Kind::Str) ? v.as_str() : render_value(v);
            out_ += "\n";
          } else if constexpr (std::is_same_v<T, IfStmt>) {
            Value c = eval(n.condition, f);
            if (!c.is(Value::Kind::Bool)) {
              throw EvalError(where(f, s.loc),
                              "condition must be bool, found " + summarize_value(c));
            }
            if (c.as_bool()) return exec_block(n.then_block, f);
            if (n.else_block) return exec_block(*n.else_block, f);
          }
          return std::nullopt;
        },
        s.node);
  }

  // ---- expressions ----

  Value eval(const Expr& e, Frame& f) {
    return std::visit(
        [&](const auto& n) -> Value {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, LiteralExpr>) {
            return Value::from_literal(n.value);
          } else if constexpr (std::is_same_v<T, NameExpr>) {
            auto it = f.vars.find(n.name);
            if (it == f.vars.end()) {
              throw EvalError(where(f, e.loc), "'" + n.name + "' is not bound here");
            }
            return it->second;
          } else if constexpr (std::is_same_v<T, CallExpr>) {
            return call(n, e.loc, f);
          } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
            return method_call(n, f);
          } else if constexpr (std::is_same_v<T, AttributeExpr>) {
            Value obj = eval(*n.object, f);
            if (!obj.is(Value::Kind::Object)) {
              throw EvalError(where(f, n.attribute_loc),
                              "attribute access on " + summarize_value(obj));
            }
            const Value* v = obj.as_object().field(n.attribute);
            if (!v) {
              throw EvalError(where(f, n.attribute_loc),
                              obj.as_object().class_name + " has no field '" +
                                  n.attribute + "'");
            }
            return *v;
          } else if constexpr (std::is_same_v<T, ListExpr>) {
            Value::List items;
            for (const Expr& x : n.elements) items.push_back(eval(x, f));
            return Value::list(std::move(items));
          } else if constexpr (std::is_same_v<T, MapExpr>) {
            Value::Map entries;
            for (const MapEntryExpr& x : n.entries) {
              Value k = eval(*x.key, f);
              Value v = eval(*x.value, f);
              bool replaced = false;
              for (auto& entry : entries) {
                if (entry.first == k) {
                  entry.second = v;
                  replaced = true;
                }
              }
              if (!replaced) entries.emplace_back(std::move(k), std::move(v));
            }
            return Value::map(std::move(entries));
          } else if constexpr (std::is_same_v<T, UnaryExpr>) {
            Value v = eval(*n.operand, f);
            if (v.is(Value::Kind::Float)) return Value::floating(-v.as_float());
            if (v.is(Value::Kind::Int)) {
              std::int64_t out = 0;
              if (__builtin_sub_overflow(std::int64_t{0}, v.as_int(), &out)) {
                throw EvalError(where(f, e.loc), "integer overflow");
              }
              return Value::integer(out);
            }
            throw EvalError(where(f, e.loc), "cannot negate " + summarize_value(v));
          } else if constexpr (std::is_same_v<T, BinaryExpr>) {
            return binary(n, e.loc, f);
          }
        },
        e.node);
  }

  Value binary(const BinaryExpr& n, SourceLoc loc, Frame& f) {
    Value a = eval(*n.lhs, f);
    Value b = eval(*n.rhs, f);
    const std::string at = where(f, loc);
    auto bad = [&]() -> Value {
      throw EvalError(at, "operator " + std::string(binary_op_text(n.op)) +
                              " on " + summarize_value(a) + " and " +
                              summarize_value(b));
    };
    switch (n.op) {
      case BinaryOp::Eq: return Value::boolean(a == b);
      case BinaryOp::Ne: return Value::boolean(!(a == b));
      default: break;
    }
    if (a.kind() != b.kind()) return bad();
    if (n.op == BinaryOp::Lt || n.op == BinaryOp::Le || n.op == BinaryOp::Gt ||
        n.op == BinaryOp::Ge) {
      int cmp = 0;
      if (a.is(Value::Kind::Int)) {
        cmp = a.as_int() < b.as_int() ? -1 : a.as_int() > b.as_int();
      } else if (a.is(Value::Kind::Float)) {
        cmp = a.as_float() < b.as_float() ? -1 : a.as_float() > b.as_float();
      } else if (a.is(Value::Kind::Str)) {
        cmp = a.as_str().compare(b.as_str());
      } else {
        return bad();
      }
      switch (n.op) {
        case BinaryOp::Lt: return Value::boolean(cmp < 0);
        case BinaryOp::Le: return Value::boolean(cmp <= 0);
        case BinaryOp::Gt: return Value::boolean(cmp > 0);
        default: return Value::boolean(cmp >= 0);
      }
    }
    if (a.is(Value::Kind::Str)) {
      if (n.op != BinaryOp::Add) return bad();
      return Value::string(a.as_str() + b.as_str());
    }
    if (a.is(Value::Kind::Float)) {
      const double x = a.as_float(), y = b.as_float();
      switch (n.op) {
        case BinaryOp::Add: return Value::floating(x + y);
        case BinaryOp::Sub: return Value::floating(x - y);
        case BinaryOp::Mul: return Value::floating(x * y);
        case BinaryOp::Div:
          if (y == 0.0) throw EvalError(at, "division by zero");
          return Value::floating(x / y);
        default: return bad();
      }
    }
    if (!a.is(Value::Kind::Int)) return bad();
    const std::int64_t x = a.as_int(), y = b.as_int();
    std::int64_t out = 0;
    bool overflow = false;
    switch (n.op) {
      case BinaryOp::Add: overflow = __builtin_add_overflow(x, y, &out); break;
      case BinaryOp::Sub: overflow = __builtin_sub_overflow(x, y, &out); break;
      case BinaryOp::Mul: overflow = __builtin_mul_overflow(x, y, &out); break;
      case BinaryOp::Div:
        if (y == 0) throw EvalError(at, "division by zero");
        if (x == INT64_MIN && y == -1) overflow = true;
        else out = x / y;
        break;
      default: return bad();
    }
    if (overflow) throw EvalError(at, "integer overflow");
    return Value::integer(out);
  }

  // ---- calls ----

  const SymbolId& target(const Frame& f, SourceLoc loc, const std::string& name) {
    const SymbolId* id = registry_.target_at(f.module, loc);
    if (!id) throw EvalError(where(f, loc), "unresolved '" + name + "'");
    return *id;
  }

  // Evaluates arguments and pairs them with `names` (positional first, then
  // by name). Missing names are absent from the result.
  std::vector<std::optional<Value>> bind_args(const std::vector<Argument>& args,
                                              const std::vector<std::string>& names,
                                              Frame& f, SourceLoc loc,
                                              const std::string& callee) {
    std::vector<std::optional<Value>> slots(names.size());
    std::size_t positional = 0;
    for (const Argument& a : args) {
      std::size_t index = names.size();
      if (!a.name) {
        index = positional++;
      } else {
        for (std::size_t i = 0; i < names.size(); ++i) {
          if (names[i] == *a.name) index = i;
        }
      }
      if (index >= names.size()) {
        throw ArityError(where(f, a.name ? a.name_loc : loc) + ": " + callee +
                         (a.name ? " has no parameter '" + *a.name + "'"
                                 : " given too many arguments"));
      }
      if (slots[index]) {
        throw ArityError(where(f, loc) + ": '" + names[index] +
                         "' given more than once");
      }
      slots[index] = eval(*a.value, f);
    }
    return slots;
  }

  void check_value(const Value& v, const TypeExpr& t, const std::string& at,
                   const std::string& what) {
    TypeCheckReport r = check_type(v, t, schemas_);
    if (!r.ok) {
      const TypeMismatch& m = r.mismatches.front();
      throw ArgTypeError(at, what + " at " + m.path + ": expected " + m.expected +
                                 ", found " + m.found);
    }
  }

  Value call(const CallExpr& n, SourceLoc loc, Frame& f) {
    const SymbolId& id = target(f, loc, n.callee);
    if (id.kind == SymbolKind::Class) return construct(n, id, loc, f);
    auto it = callables_.find(id);
    if (it == callables_.end()) {
      throw EvalError(where(f, loc), "'" + n.callee + "' is not callable");
    }
    const FuncDecl& fn = *it->second.decl;
    std::vector<std::string> names;
    for (const Param& p : fn.params) names.push_back(p.name);
    auto slots = bind_args(n.args, names, f, loc, n.callee);
    return invoke(it->second, std::move(slots), nullptr, where(f, loc));
  }

  Value method_call(const MethodCallExpr& n, Frame& f) {
    Value receiver = eval(*n.receiver, f);
    const SymbolId& id = target(f, n.method_loc, n.method);
    auto it = callables_.find(id);
    if (it == callables_.end() || id.kind != SymbolKind::Method) {
      throw EvalError(where(f, n.method_loc), "'" + n.method + "' is not a method");
    }
    if (!receiver.is(Value::Kind::Object) ||
        receiver.as_object().class_name != it->second.owner->name) {
      throw EvalError(where(f, n.method_loc),
                      "method " + it->second.owner->name + "." + n.method +
                          " called on " + summarize_value(receiver));
    }
    std::vector<std::string> names;
    for (const Param& p : it->second.decl->params) names.push_back(p.name);
    auto slots = bind_args(n.args, names, f, n.method_loc, n.method);
    return invoke(it->second, std::move(slots), &receiver, where(f, n.method_loc));
  }

  Value invoke(const Callable& c, std::vector<std::optional<Value>> slots,
               const Value* receiver, const std::string& at) {
    const FuncDecl& fn = *c.decl;
    const std::string name = c.owner ? c.owner->name + "." + fn.name : fn.name;
    BoundValues bound;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (!slots[i]) {
        throw ArityError(at + ": " + name + " is missing argument '" +
                         fn.params[i].name + "'");
      }
      bound.emplace_back(fn.params[i].name, std::move(*slots[i]));
    }

    if (fn.by) {
      const std::string site_id = make_site_id(c.module, fn.by->loc);
      const MtirEntry* entry = mtir_.find(site_id);
      if (!entry) throw EvalError(at, "no MT-IR entry for by-site " + site_id);
      return invoke_model(*entry, bound, receiver, config_, ledger_);
    }

    for (const auto& [pname, value] : bound) {
      const Param& p = *std::find_if(fn.params.begin(), fn.params.end(),
                                     [&](const Param& q) { return q.name == pname; });
      check_value(value, p.type, at, name + " argument '" + pname + "'");
    }
    if (depth_ >= kMaxDepth) throw EvalError(at, "call depth limit exceeded");
    Frame frame{c.module, name, {}};
    if (receiver) frame.vars.emplace("self", *receiver);
    for (auto& [pname, value] : bound) frame.vars.insert_or_assign(pname, std::move(value));
    ++depth_;
    std::optional<Value> result;
    try {
      result = exec_block(*fn.body, frame);
    } catch (...) {
      --depth_;
      throw;
    }
    --depth_;
    if (!result) throw EvalError(at, name + " finished without returning a value");
    check_value(*result, fn.return_type, at, name + " return value");
    return std::move(*result);
  }

  Value construct(const CallExpr& n, const SymbolId& id, SourceLoc loc, Frame& f) {
    const ClassDecl& cls = *classes_.at(id);
    std::vector<std::string> names;
    for (const FieldDecl& fd : cls.fields) names.push_back(fd.name);
    auto slots = bind_args(n.args, names, f, loc, cls.name);
    const std::string at = where(f, loc);

    if (n.by) {
      const std::string site_id = make_site_id(f.module, n.by->loc);
      const MtirEntry* entry = mtir_.find(site_id);
      if (!entry) throw EvalError(at, "no MT-IR entry for by-site " + site_id);
      BoundValues provided;
      for (const Slot& s : entry->params) {
        for (std::size_t i = 0; i < names.size(); ++i) {
          if (names[i] == s.name && slots[i]) provided.emplace_back(s.name, *slots[i]);
        }
      }
      return eval_object_init_by(*entry, provided, config_, ledger_);
    }

    std::vector<std::pair<std::string, Value>> fields;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (!slots[i]) {
        throw ArityError(at + ": " + cls.name + " is missing field '" + names[i] + "'");
      }
      check_value(*slots[i], cls.fields[i].type, at, cls.name + " field '" + names[i] + "'");
      fields.emplace_back(names[i], std::move(*slots[i]));
    }
    return Value::object(cls.name, std::move(fields));
  }

  std::span<const ModuleAST> modules_;
  SemanticRegistry registry_;
  const MtirMap& mtir_;
  const RunConfig& config_;
  TokenLedger& ledger_;
  SchemaTable schemas_;
  std::map<SymbolId, Callable> callables_;
  std::map<SymbolId, const ClassDecl*> classes_;
  std::string out_;
  int depth_ = 0;
};

}  // namespace

RunResult run_program(std::span<const ModuleAST> modules, const MtirMap& mtir,
                      const RunConfig& config) {
  RunResult result;
  result.ledger = config.ledger ? config.ledger : std::make_shared<TokenLedger>();
  std::optional<Interpreter> interp;
  try {
    interp.emplace(modules, mtir, config, *result.ledger);
    result.stdout_text = interp->run();
  } catch (const Error& e) {
    if (interp) result.stdout_text = interp->output();
    result.exit_status = e.exit_status();
    result.diagnostic = e.what();
  } catch (const std::exception& e) {
    if (interp) result.stdout_text = interp->output();
    result.exit_status = 2;
    result.diagnostic = std::string("internal error: ") + e.what();
  }
  return result;
}

}  // namespace mtp
