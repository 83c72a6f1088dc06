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

#include "mtp/printer.h"

#include <sstream>

namespace mtp {

namespace {

std::string print_args(const std::vector<Argument>& args) {
  std::string out = "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    if (args[i].name) out += *args[i].name + "=";
    out += print_expr(*args[i].value);
  }
  return out + ")";
}

class StmtPrinter {
 public:
  explicit StmtPrinter(std::ostringstream& out) : out_(out) {}

  void block(const Block& b, int indent) {
    out_ << "{\n";
    for (const Stmt& s : b.statements) stmt(s, indent + 1);
    pad(indent);
    out_ << "}";
  }

  void stmt(const Stmt& s, int indent) {
    pad(indent);
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, LetStmt>) {
            out_ << "let " << n.name << " = " << print_expr(n.value);
          } else if constexpr (std::is_same_v<T, ExprStmt>) {
            out_ << print_expr(n.expr);
          } else if constexpr (std::is_same_v<T, ReturnStmt>) {
            out_ << "return " << print_expr(n.value);
          } else if constexpr (std::is_same_v<T, PrintStmt>) {
            out_ << "print(" << print_expr(n.value) << ")";
          } else if constexpr (std::is_same_v<T, IfStmt>) {
            out_ << "if " << print_expr(n.condition) << " ";
            block(n.then_block, indent);
            if (n.else_block) {
              out_ << " else ";
              block(*n.else_block, indent);
            }
          }
        },
        s.node);
    out_ << "\n";
  }

  void function(const FuncDecl& f, int indent) {
    pad(indent);
    out_ << "def " << f.name << "(";
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      if (i) out_ << ", ";
      out_ << f.params[i].name << ": " << f.params[i].type.to_string();
    }
    out_ << ") -> " << f.return_type.to_string();
    if (f.by) {
      out_ << " " << print_by_clause(*f.by);
    } else if (f.body) {
      out_ << " ";
      block(*f.body, indent);
    }
    out_ << "\n";
  }

 private:
  void pad(int indent) { out_ << std::string(2 * indent, ' '); }

  std::ostringstream& out_;
};

}  // namespace

std::string print_by_clause(const ByClause& by) {
  std::string out = "by " + by.model_ref;
  if (!by.hyperparams.empty()) {
    out += "(";
    for (std::size_t i = 0; i < by.hyperparams.size(); ++i) {
      if (i) out += ", ";
      out += by.hyperparams[i].name + "=" +
             literal_to_source(by.hyperparams[i].value);
    }
    out += ")";
  }
  return out;
}

std::string print_expr(const Expr& expr) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LiteralExpr>) {
          return literal_to_source(n.value);
        } else if constexpr (std::is_same_v<T, NameExpr>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          std::string out = n.callee + print_args(n.args);
          if (n.by) out += " " + print_by_clause(*n.by);
          return out;
        } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
          return print_expr(*n.receiver) + "." + n.method + print_args(n.args);
        } else if constexpr (std::is_same_v<T, AttributeExpr>) {
          return print_expr(*n.object) + "." + n.attribute;
        } else if constexpr (std::is_same_v<T, ListExpr>) {
          std::string out = "[";
          for (std::size_t i = 0; i < n.elements.size(); ++i) {
            if (i) out += ", ";
            out += print_expr(n.elements[i]);
          }
          return out + "]";
        } else if constexpr (std::is_same_v<T, MapExpr>) {
          std::string out = "{";
          for (std::size_t i = 0; i < n.entries.size(); ++i) {
            if (i) out += ", ";
            out += print_expr(*n.entries[i].key) + ": " +
                   print_expr(*n.entries[i].value);
          }
          return out + "}";
        } else if constexpr (std::is_same_v<T, UnaryExpr>) {
          return "-" + print_expr(*n.operand);
        } else {
          return "(" + print_expr(*n.lhs) + " " +
                 std::string(binary_op_text(n.op)) + " " + print_expr(*n.rhs) +
                 ")";
        }
      },
      expr.node);
}

std::string print_module(const ModuleAST& module) {
  std::ostringstream out;
  StmtPrinter printer(out);
  for (const Import& i : module.imports) out << "import " << i.module << "\n";
  for (const Decl& d : module.decls) {
    out << "\n";
    if (const auto* c = std::get_if<ClassDecl>(&d)) {
      out << "class " << c->name << " {\n";
      for (const FieldDecl& f : c->fields) {
        out << "  " << f.name << ": " << f.type.to_string() << "\n";
      }
      for (const FuncDecl& m : c->methods) printer.function(m, 1);
      out << "}\n";
    } else {
      printer.function(std::get<FuncDecl>(d), 0);
    }
  }
  if (!module.statements.empty()) out << "\n";
  for (const Stmt& s : module.statements) printer.stmt(s, 0);
  return out.str();
}

}  // namespace mtp
