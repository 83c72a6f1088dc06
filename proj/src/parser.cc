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

#include "mtp/parser.h"

#include <set>

#include "mtp/errors.h"
#include "mtp/literals.h"

namespace mtp {

namespace {

class Parser {
 public:
  Parser(std::span<const Token> tokens, std::string module_name)
      : tokens_(tokens), module_name_(std::move(module_name)) {
    if (tokens_.empty() || tokens_.back().kind != TokenKind::EndOfInput) {
      throw ParseError({}, "token stream ending in end of input",
                       "truncated stream");
    }
  }

  ModuleAST parse_module() {
    ModuleAST module;
    module.name = module_name_;
    std::set<std::string> decl_names;
    std::set<std::string> imports;
    while (!at_end()) {
      if (peek().is_keyword("import")) {
        SourceLoc loc = take().loc;
        std::string name = expect_identifier("module name");
        if (!imports.insert(name).second) {
          throw DuplicateError(name, module_name_, loc, "import");
        }
        module.imports.push_back({std::move(name), loc});
      } else if (peek().is_keyword("class") || peek().is_keyword("def")) {
        Decl decl = peek().is_keyword("class") ? Decl{parse_class()}
                                               : Decl{parse_function()};
        if (!decl_names.insert(decl_name(decl)).second) {
          throw DuplicateError(decl_name(decl), module_name_, decl_loc(decl),
                               "declaration");
        }
        module.decls.push_back(std::move(decl));
      } else {
        module.statements.push_back(parse_statement());
      }
    }
    return module;
  }

  TypeExpr parse_standalone_type() {
    TypeExpr t = parse_type();
    if (!at_end()) fail("end of type");
    return t;
  }

 private:
  // ---- token helpers ----

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }
  bool at_end() const { return peek().kind == TokenKind::EndOfInput; }
  const Token& take() {
    const Token& t = peek();
    if (!at_end()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(peek().loc, expected, describe_token(peek()));
  }

  const Token& expect_punct(std::string_view p) {
    if (!peek().is_punct(p)) fail("'" + std::string(p) + "'");
    return take();
  }

  void expect_keyword(std::string_view k) {
    if (!peek().is_keyword(k)) fail("'" + std::string(k) + "'");
    take();
  }

  std::string expect_identifier(const std::string& what) {
    if (peek().kind != TokenKind::Identifier) fail(what);
    return take().lexeme;
  }

  bool accept_punct(std::string_view p) {
    if (!peek().is_punct(p)) return false;
    take();
    return true;
  }

  // ---- declarations ----

  ClassDecl parse_class() {
    ClassDecl cls;
    cls.loc = peek().loc;
    expect_keyword("class");
    cls.name = expect_identifier("class name");
    expect_punct("{");
    std::set<std::string> members;
    while (!peek().is_punct("}")) {
      if (at_end()) fail("'}' closing class " + cls.name);
      if (peek().is_keyword("def")) {
        FuncDecl method = parse_function();
        if (!members.insert(method.name).second) {
          throw DuplicateError(method.name, module_name_, method.loc,
                               "member of class " + cls.name);
        }
        cls.methods.push_back(std::move(method));
        continue;
      }
      FieldDecl field;
      field.loc = peek().loc;
      field.name = expect_identifier("field name or 'def'");
      expect_punct(":");
      field.type = parse_type();
      if (!members.insert(field.name).second) {
        throw DuplicateError(field.name, module_name_, field.loc,
                             "member of class " + cls.name);
      }
      cls.fields.push_back(std::move(field));
    }
    take();
    return cls;
  }

  FuncDecl parse_function() {
    FuncDecl fn;
    fn.loc = peek().loc;
    expect_keyword("def");
    fn.name = expect_identifier("function name");
    expect_punct("(");
    std::set<std::string> names;
    if (!peek().is_punct(")")) {
      do {
        Param p;
        p.loc = peek().loc;
        p.name = expect_identifier("parameter name");
        expect_punct(":");
        p.type = parse_type();
        if (!names.insert(p.name).second) {
          throw DuplicateError(p.name, module_name_, p.loc, "parameter");
        }
        fn.params.push_back(std::move(p));
      } while (accept_punct(","));
    }
    expect_punct(")");
    expect_punct("->");
    fn.return_type = parse_type();
    if (peek().is_keyword("by")) {
      fn.by = parse_by_clause();
    } else if (peek().is_punct("{")) {
      ++function_depth_;
      fn.body = parse_block();
      --function_depth_;
    } else {
      fail("'by' or '{' after return type");
    }
    return fn;
  }

  ByClause parse_by_clause() {
    ByClause by;
    by.loc = peek().loc;
    expect_keyword("by");
    by.model_ref = expect_identifier("model reference");
    if (accept_punct("(")) {
      std::set<std::string> names;
      if (!peek().is_punct(")")) {
        do {
          HyperParam h;
          h.loc = peek().loc;
          h.name = expect_identifier("hyperparameter name");
          expect_punct("=");
          h.value = parse_literal();
          if (!names.insert(h.name).second) {
            throw DuplicateError(h.name, module_name_, h.loc, "hyperparameter");
          }
          by.hyperparams.push_back(std::move(h));
        } while (accept_punct(","));
      }
      expect_punct(")");
    }
    return by;
  }

  Literal parse_literal() {
    bool negative = accept_punct("-");
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::IntLiteral:
      case TokenKind::FloatLiteral: {
        take();
        NumberLiteral n = *parse_number(t.lexeme);
        if (auto* i = std::get_if<std::int64_t>(&n)) {
          return negative ? -*i : *i;
        }
        double d = std::get<double>(n);
        return negative ? -d : d;
      }
      case TokenKind::StringLiteral:
        if (negative) fail("number after '-'");
        take();
        return *unescape_string(
            std::string_view(t.lexeme).substr(1, t.lexeme.size() - 2));
      case TokenKind::Keyword:
        if (!negative && (t.lexeme == "true" || t.lexeme == "false")) {
          take();
          return t.lexeme == "true";
        }
        [[fallthrough]];
      default:
        fail(negative ? "number after '-'" : "literal");
    }
  }

  TypeExpr parse_type() {
    const Token& t = peek();
    SourceLoc loc = t.loc;
    if (t.kind == TokenKind::Keyword) {
      static const std::pair<std::string_view, PrimitiveType> kPrims[] = {
          {"int", PrimitiveType::Int},
          {"float", PrimitiveType::Float},
          {"str", PrimitiveType::Str},
          {"bool", PrimitiveType::Bool},
      };
      for (auto [word, prim] : kPrims) {
        if (t.lexeme == word) {
          take();
          return TypeExpr::prim(prim, loc);
        }
      }
      fail("type");
    }
    if (t.kind != TokenKind::Identifier) fail("type");
    if (t.lexeme == "list" && peek(1).is_punct("[")) {
      take();
      take();
      TypeExpr element = parse_type();
      expect_punct("]");
      return TypeExpr::list_of(std::move(element), loc);
    }
    if (t.lexeme == "map" && peek(1).is_punct("[")) {
      take();
      take();
      TypeExpr key = parse_type();
      expect_punct(",");
      TypeExpr value = parse_type();
      expect_punct("]");
      return TypeExpr::map_of(std::move(key), std::move(value), loc);
    }
    take();
    return TypeExpr::named(t.lexeme, loc);
  }

  // ---- statements ----

  Block parse_block() {
    expect_punct("{");
    Block block;
    while (!peek().is_punct("}")) {
      if (at_end()) fail("'}'");
      block.statements.push_back(parse_statement());
    }
    take();
    return block;
  }

  Stmt parse_statement() {
    Stmt stmt;
    stmt.loc = peek().loc;
    const Token& t = peek();
    if (t.is_keyword("let")) {
      take();
      LetStmt let;
      let.name = expect_identifier("variable name");
      expect_punct("=");
      let.value = parse_expr();
      stmt.node = std::move(let);
    } else if (t.is_keyword("print")) {
      take();
      expect_punct("(");
      PrintStmt print{parse_expr()};
      expect_punct(")");
      stmt.node = std::move(print);
    } else if (t.is_keyword("return")) {
      if (function_depth_ == 0) {
        throw ParseError(t.loc, "statement", "'return' outside a function");
      }
      take();
      stmt.node = ReturnStmt{parse_expr()};
    } else if (t.is_keyword("if")) {
      stmt.node = parse_if();
    } else {
      stmt.node = ExprStmt{parse_expr()};
    }
    return stmt;
  }

  IfStmt parse_if() {
    expect_keyword("if");
    IfStmt s;
    s.condition = parse_expr();
    s.then_block = parse_block();
    if (peek().is_keyword("else")) {
      take();
      if (peek().is_keyword("if")) {
        Stmt nested;
        nested.loc = peek().loc;
        nested.node = parse_if();
        Block b;
        b.statements.push_back(std::move(nested));
        s.else_block = std::move(b);
      } else {
        s.else_block = parse_block();
      }
    }
    return s;
  }

  // ---- expressions ----

  Expr parse_expr() { return parse_comparison(); }

  static std::optional<BinaryOp> comparison_op(const Token& t) {
    if (t.kind != TokenKind::Punct) return std::nullopt;
    if (t.lexeme == "==") return BinaryOp::Eq;
    if (t.lexeme == "!=") return BinaryOp::Ne;
    if (t.lexeme == "<") return BinaryOp::Lt;
    if (t.lexeme == "<=") return BinaryOp::Le;
    if (t.lexeme == ">") return BinaryOp::Gt;
    if (t.lexeme == ">=") return BinaryOp::Ge;
    return std::nullopt;
  }

  static Expr binary(BinaryOp op, Expr lhs, Expr rhs) {
    SourceLoc loc = lhs.loc;
    return Expr{BinaryExpr{op, std::move(lhs), std::move(rhs)}, loc};
  }

  Expr parse_comparison() {
    Expr lhs = parse_additive();
    if (auto op = comparison_op(peek())) {
      take();
      Expr rhs = parse_additive();
      if (comparison_op(peek())) fail("end of comparison (comparisons do not chain)");
      return binary(*op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Expr parse_additive() {
    Expr lhs = parse_multiplicative();
    while (peek().is_punct("+") || peek().is_punct("-")) {
      BinaryOp op = take().lexeme == "+" ? BinaryOp::Add : BinaryOp::Sub;
      lhs = binary(op, std::move(lhs), parse_multiplicative());
    }
    return lhs;
  }

  Expr parse_multiplicative() {
    Expr lhs = parse_unary();
    while (peek().is_punct("*") || peek().is_punct("/")) {
      BinaryOp op = take().lexeme == "*" ? BinaryOp::Mul : BinaryOp::Div;
      lhs = binary(op, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  Expr parse_unary() {
    if (peek().is_punct("-")) {
      SourceLoc loc = take().loc;
      return Expr{UnaryExpr{parse_unary()}, loc};
    }
    return parse_postfix();
  }

  Expr parse_postfix() {
    Expr e = parse_primary();
    while (peek().is_punct(".")) {
      take();
      SourceLoc member_loc = peek().loc;
      std::string member = expect_identifier("attribute or method name");
      SourceLoc loc = e.loc;
      if (peek().is_punct("(")) {
        std::vector<Argument> args = parse_args();
        e = Expr{MethodCallExpr{std::move(e), std::move(member), member_loc,
                                std::move(args)},
                 loc};
      } else {
        e = Expr{AttributeExpr{std::move(e), std::move(member), member_loc},
                 loc};
      }
    }
    return e;
  }

  std::vector<Argument> parse_args() {
    expect_punct("(");
    std::vector<Argument> args;
    std::set<std::string> names;
    if (!peek().is_punct(")")) {
      do {
        Argument arg{std::nullopt, {}, Expr{}};
        if (peek().kind == TokenKind::Identifier && peek(1).is_punct("=")) {
          arg.name_loc = peek().loc;
          arg.name = take().lexeme;
          take();
          if (!names.insert(*arg.name).second) {
            throw DuplicateError(*arg.name, module_name_, arg.name_loc,
                                 "named argument");
          }
        } else if (!names.empty()) {
          fail("named argument (positional arguments must come first)");
        }
        arg.value = parse_expr();
        args.push_back(std::move(arg));
      } while (accept_punct(","));
    }
    expect_punct(")");
    return args;
  }

  Expr parse_primary() {
    const Token& t = peek();
    SourceLoc loc = t.loc;
    switch (t.kind) {
      case TokenKind::IntLiteral:
      case TokenKind::FloatLiteral:
      case TokenKind::StringLiteral:
        return Expr{LiteralExpr{parse_literal()}, loc};
      case TokenKind::Keyword:
        if (t.lexeme == "true" || t.lexeme == "false") {
          return Expr{LiteralExpr{parse_literal()}, loc};
        }
        fail("expression");
      case TokenKind::Identifier: {
        std::string name = take().lexeme;
        if (!peek().is_punct("(")) return Expr{NameExpr{std::move(name)}, loc};
        CallExpr call{std::move(name), parse_args(), std::nullopt};
        if (peek().is_keyword("by")) call.by = parse_by_clause();
        return Expr{std::move(call), loc};
      }
      case TokenKind::Punct:
        if (t.lexeme == "(") {
          take();
          Expr inner = parse_expr();
          expect_punct(")");
          return inner;
        }
        if (t.lexeme == "[") {
          take();
          ListExpr list;
          if (!peek().is_punct("]")) {
            do {
              list.elements.push_back(parse_expr());
            } while (accept_punct(","));
          }
          expect_punct("]");
          return Expr{std::move(list), loc};
        }
        if (t.lexeme == "{") {
          take();
          MapExpr map;
          if (!peek().is_punct("}")) {
            do {
              Expr key = parse_expr();
              expect_punct(":");
              Expr value = parse_expr();
              map.entries.push_back({std::move(key), std::move(value)});
            } while (accept_punct(","));
          }
          expect_punct("}");
          return Expr{std::move(map), loc};
        }
        fail("expression");
      default:
        fail("expression");
    }
  }

  std::span<const Token> tokens_;
  std::string module_name_;
  std::size_t pos_ = 0;
  int function_depth_ = 0;
};

}  // namespace

ModuleAST parse_module(std::span<const Token> tokens, std::string name) {
  return Parser(tokens, std::move(name)).parse_module();
}

ModuleAST parse_source(std::string_view source, std::string name) {
  std::vector<Token> tokens = tokenize(source);
  return parse_module(tokens, std::move(name));
}

TypeExpr parse_type_text(std::string_view text) {
  std::vector<Token> tokens = tokenize(text);
  return Parser(tokens, "<type>").parse_standalone_type();
}

}  // namespace mtp
