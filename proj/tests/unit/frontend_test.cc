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

#include <gtest/gtest.h>

#include <random>

#include "mtp/errors.h"
#include "mtp/lexer.h"
#include "mtp/literals.h"
#include "mtp/parser.h"
#include "mtp/printer.h"
#include "mtp/program.h"
#include "support.h"

namespace mtp {
namespace {

using testing::fixture_path;
using testing::read_file;

std::vector<std::string> lexemes(std::string_view source) {
  std::vector<std::string> out;
  for (const Token& t : tokenize(source)) {
    if (t.kind != TokenKind::EndOfInput) out.push_back(t.lexeme);
  }
  return out;
}

TEST(Lexer, ByDeclaration) {
  auto tokens = tokenize("def f() -> int by llm");
  std::vector<std::string> expected = {"def", "f", "(", ")", "->", "int", "by", "llm"};
  EXPECT_EQ(lexemes("def f() -> int by llm"), expected);
  EXPECT_EQ(tokens[0].kind, TokenKind::Keyword);
  EXPECT_EQ(tokens[1].kind, TokenKind::Identifier);
  EXPECT_EQ(tokens[4].kind, TokenKind::Punct);
  EXPECT_EQ(tokens[6].kind, TokenKind::Keyword);
  EXPECT_EQ(tokens.back().kind, TokenKind::EndOfInput);
}

TEST(Lexer, UnterminatedString) {
  try {
    tokenize("\"");
    FAIL() << "no LexError";
  } catch (const LexError& e) {
    EXPECT_EQ(e.loc.line, 1);
  }
}

TEST(Lexer, MinimalAssignment) {
  auto tokens = tokenize("x=1");
  ASSERT_EQ(tokens.size(), 4u);
  EXPECT_EQ(tokens[0].kind, TokenKind::Identifier);
  EXPECT_TRUE(tokens[1].is_punct("="));
  EXPECT_EQ(tokens[2].kind, TokenKind::IntLiteral);
  EXPECT_EQ(tokens[2].lexeme, "1");
}

TEST(Lexer, IllegalCharacter) {
  try {
    tokenize("let x = 1\nlet y = @");
    FAIL() << "no LexError";
  } catch (const LexError& e) {
    EXPECT_EQ(e.loc.line, 2);
    EXPECT_EQ(e.loc.column, 9);
  }
}

TEST(Lexer, BadEscapeRejected) {
  EXPECT_THROW(tokenize(R"("a\tb")"), LexError);
  EXPECT_NO_THROW(tokenize(R"("a\nb\"c\\")"));
}

TEST(Lexer, CommentsAndContextualWords) {
  auto tokens = tokenize("map: list[int] # trailing\n");
  EXPECT_EQ(tokens[0].kind, TokenKind::Identifier);
  EXPECT_EQ(tokens[2].kind, TokenKind::Identifier);
  EXPECT_EQ(tokens[4].kind, TokenKind::Keyword);
  EXPECT_EQ(tokens.size(), 7u);
}

TEST(Lexer, FloatForms) {
  auto tokens = tokenize("1.5 2e3 7");
  EXPECT_EQ(tokens[0].kind, TokenKind::FloatLiteral);
  EXPECT_EQ(tokens[1].kind, TokenKind::FloatLiteral);
  EXPECT_EQ(tokens[2].kind, TokenKind::IntLiteral);
}

// Lexemes with whitespace and comments removed reproduce the significant
// characters of the source.
TEST(Lexer, LexemesCoverSignificantText) {
  for (const char* rel : {"game/game.mtp", "game/level.mtp", "game/primitives.mtp",
                          "person/age_function.mtp", "person/person_init.mtp", "person/age_method.mtp"}) {
    std::string source = read_file(fixture_path(rel));
    std::string significant;
    bool in_string = false, in_comment = false;
    for (std::size_t i = 0; i < source.size(); ++i) {
      char c = source[i];
      if (in_comment) {
        in_comment = c != '\n';
        continue;
      }
      if (c == '"' && (i == 0 || source[i - 1] != '\\')) in_string = !in_string;
      if (!in_string && c == '#') {
        in_comment = true;
        continue;
      }
      if (in_string || (c != ' ' && c != '\n' && c != '\t' && c != '\r')) significant += c;
    }
    std::string joined;
    for (const std::string& l : lexemes(source)) {
      for (char c : l) {
        if (c != ' ') joined += c;
      }
    }
    std::string squeezed;
    for (char c : significant) {
      if (c != ' ') squeezed += c;
    }
    EXPECT_EQ(joined, squeezed) << rel;
  }
}

TEST(Lexer, LocationsNonDecreasing) {
  for (const char* rel : {"game/game.mtp", "game/level.mtp", "person/age_method.mtp"}) {
    std::string source = read_file(fixture_path(rel));
    auto tokens = tokenize(source);
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      EXPECT_LE(tokens[i - 1].loc, tokens[i].loc) << rel << " token " << i;
    }
    for (const Token& t : tokens) {
      EXPECT_GE(t.loc.line, 1);
      EXPECT_GE(t.loc.column, 1);
    }
  }
}

TEST(Literals, FloatFormatting) {
  EXPECT_EQ(format_float(2.0), "2.0");
  EXPECT_EQ(format_float(0.1), "0.1");
  EXPECT_EQ(format_float(-0.0), "-0.0");
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    double d = std::bit_cast<double>(rng());
    if (!std::isfinite(d)) continue;
    d = std::fabs(d);
    std::string text = format_float(d);
    auto back = parse_number(text);
    ASSERT_TRUE(back) << text;
    ASSERT_TRUE(std::holds_alternative<double>(*back)) << text;
    EXPECT_EQ(std::get<double>(*back), d) << text;
  }
}

TEST(Literals, StringQuoting) {
  EXPECT_EQ(quote_string("a\"b\\c\nd"), R"("a\"b\\c\nd")");
  EXPECT_EQ(unescape_string(R"(a\"b\\c\nd)"), std::optional<std::string>("a\"b\\c\nd"));
  EXPECT_EQ(unescape_string(R"(\t)"), std::nullopt);
}

// ---- parser ----

TEST(Parser, NextLevelDeclaration) {
  ModuleAST m = parse_source(
      "def get_next_level(prev_levels: list[Level]) -> Level by llm", "game");
  const FuncDecl* f = m.find_function("get_next_level");
  ASSERT_NE(f, nullptr);
  ASSERT_TRUE(f->by);
  EXPECT_FALSE(f->body);
  EXPECT_EQ(f->by->model_ref, "llm");
  EXPECT_EQ(f->return_type, TypeExpr::named("Level"));
  ASSERT_EQ(f->params.size(), 1u);
  EXPECT_EQ(f->params[0].type, TypeExpr::list_of(TypeExpr::named("Level")));
}

TEST(Parser, PersonClass) {
  ModuleAST m = parse_source("class Person { name: str  dob: str }", "person");
  const ClassDecl* c = m.find_class("Person");
  ASSERT_NE(c, nullptr);
  ASSERT_EQ(c->fields.size(), 2u);
  EXPECT_EQ(c->fields[0].name, "name");
  EXPECT_EQ(c->fields[1].name, "dob");
  EXPECT_EQ(c->fields[1].type, TypeExpr::prim(PrimitiveType::Str));
}

TEST(Parser, PlainFunction) {
  ModuleAST m = parse_source("def f(x: int) -> int { return x }", "m");
  const FuncDecl* f = m.find_function("f");
  ASSERT_NE(f, nullptr);
  EXPECT_TRUE(f->body);
  EXPECT_FALSE(f->by);
  ASSERT_EQ(f->body->statements.size(), 1u);
  EXPECT_TRUE(std::holds_alternative<ReturnStmt>(f->body->statements[0].node));
}

TEST(Parser, HyperparamsAndMethodBy) {
  ModuleAST m = parse_source(
      "class P { n: int\n def g(y: int) -> int by llm(temperature=0.7, max_tokens=50) }",
      "m");
  const FuncDecl* g = m.find_class("P")->find_method("g");
  ASSERT_TRUE(g && g->by);
  ASSERT_EQ(g->by->hyperparams.size(), 2u);
  EXPECT_EQ(g->by->hyperparams[0].name, "temperature");
  EXPECT_EQ(g->by->hyperparams[0].value, Literal(0.7));
  EXPECT_EQ(g->by->hyperparams[1].value, Literal(std::int64_t{50}));
}

TEST(Parser, ObjectInitBy) {
  ModuleAST m = parse_source(
      "class Person { name: str dob: str }\nlet e = Person(\"Einstein\") by llm", "m");
  ASSERT_EQ(m.statements.size(), 1u);
  const auto& let = std::get<LetStmt>(m.statements[0].node);
  const auto& call = std::get<CallExpr>(let.value.node);
  EXPECT_EQ(call.callee, "Person");
  ASSERT_TRUE(call.by);
  EXPECT_EQ(call.by->loc, (SourceLoc{2, 28}));
}

TEST(Parser, Errors) {
  EXPECT_THROW(parse_source("def f( -> int by llm", "m"), ParseError);
  EXPECT_THROW(parse_source("return 1", "m"), ParseError);
  EXPECT_THROW(parse_source("def f() -> int", "m"), ParseError);
  EXPECT_THROW(parse_source("def f() -> int by", "m"), ParseError);
  EXPECT_THROW(parse_source("class A { x: int }\nclass A { y: int }", "m"), DuplicateError);
  EXPECT_THROW(parse_source("def f(a: int, a: int) -> int by llm", "m"), DuplicateError);
  EXPECT_THROW(parse_source("def f() -> int by llm(t=1, t=2)", "m"), DuplicateError);
  EXPECT_THROW(parse_source("import a\nimport a", "m"), DuplicateError);
  try {
    parse_source("let x = \n", "m");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.loc.line, 2);
    EXPECT_EQ(e.exit_status(), 2);
  }
}

std::size_t count_by_tokens(std::string_view source) {
  std::size_t n = 0;
  for (const Token& t : tokenize(source)) n += t.is_keyword("by");
  return n;
}

std::size_t count_by_nodes(const ModuleAST& m) {
  std::size_t n = 0;
  std::function<void(const Expr&)> expr = [&](const Expr& e) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, CallExpr>) {
            n += x.by.has_value();
            for (const Argument& a : x.args) expr(*a.value);
          } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
            expr(*x.receiver);
            for (const Argument& a : x.args) expr(*a.value);
          } else if constexpr (std::is_same_v<T, AttributeExpr>) {
            expr(*x.object);
          } else if constexpr (std::is_same_v<T, ListExpr>) {
            for (const Expr& y : x.elements) expr(y);
          } else if constexpr (std::is_same_v<T, MapExpr>) {
            for (const auto& y : x.entries) {
              expr(*y.key);
              expr(*y.value);
            }
          } else if constexpr (std::is_same_v<T, UnaryExpr>) {
            expr(*x.operand);
          } else if constexpr (std::is_same_v<T, BinaryExpr>) {
            expr(*x.lhs);
            expr(*x.rhs);
          }
        },
        e.node);
  };
  std::function<void(const Block&)> block;
  auto stmt = [&](const Stmt& s) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, LetStmt>) expr(x.value);
          else if constexpr (std::is_same_v<T, ExprStmt>) expr(x.expr);
          else if constexpr (std::is_same_v<T, ReturnStmt>) expr(x.value);
          else if constexpr (std::is_same_v<T, PrintStmt>) expr(x.value);
          else {
            expr(x.condition);
            block(x.then_block);
            if (x.else_block) block(*x.else_block);
          }
        },
        s.node);
  };
  block = [&](const Block& b) {
    for (const Stmt& s : b.statements) stmt(s);
  };
  auto fn = [&](const FuncDecl& f) {
    n += f.by.has_value();
    if (f.body) block(*f.body);
  };
  for (const Decl& d : m.decls) {
    if (const auto* c = std::get_if<ClassDecl>(&d)) {
      for (const FuncDecl& f : c->methods) fn(f);
    } else {
      fn(std::get<FuncDecl>(d));
    }
  }
  for (const Stmt& s : m.statements) stmt(s);
  return n;
}

const char* kFixtures[] = {"game/game.mtp",    "game/level.mtp",   "game/primitives.mtp",
                           "person/age_function.mtp", "person/person_init.mtp", "person/age_method.mtp",
                           "misc/never_called.mtp", "misc/control.mtp"};

TEST(Parser, OneByNodePerByKeyword) {
  for (const char* rel : kFixtures) {
    std::string source = read_file(fixture_path(rel));
    EXPECT_EQ(count_by_nodes(parse_source(source, "m")), count_by_tokens(source)) << rel;
  }
}

TEST(Printer, FixtureRoundTrip) {
  for (const char* rel : kFixtures) {
    ModuleAST first = parse_source(read_file(fixture_path(rel)), "m");
    std::string printed = print_module(first);
    ModuleAST second = parse_source(printed, "m");
    clear_locations(first);
    clear_locations(second);
    EXPECT_EQ(first, second) << rel << "\n" << printed;
    EXPECT_EQ(print_module(second), printed) << rel;
  }
}

TEST(Printer, ExpressionsAreParenthesized) {
  ModuleAST m = parse_source("let x = 1 + 2 * -3 - 4", "m");
  EXPECT_EQ(print_expr(std::get<LetStmt>(m.statements[0].node).value),
            "((1 + (2 * -3)) - 4)");
}

// ---- programs ----

TEST(Program, GameModuleOrder) {
  auto modules = parse_program(fixture_path("game/game.mtp"));
  ASSERT_EQ(modules.size(), 3u);
  EXPECT_EQ(modules[0].name, "game");
  EXPECT_EQ(modules[1].name, "level");
  EXPECT_EQ(modules[2].name, "primitives");
}

TEST(Program, SingleFile) {
  auto modules = parse_program(fixture_path("person/age_function.mtp"));
  ASSERT_EQ(modules.size(), 1u);
  EXPECT_EQ(modules[0].name, "age_function");
}

ModuleResolver memory(std::map<std::string, std::string> sources) {
  return [sources = std::move(sources)](const std::string& name) -> std::optional<std::string> {
    auto it = sources.find(name);
    if (it == sources.end()) return std::nullopt;
    return it->second;
  };
}

TEST(Program, CycleRejected) {
  auto resolver = memory({{"a", "import b"}, {"b", "import a"}});
  try {
    parse_program("a.mtp", resolver);
    FAIL() << "cycle accepted";
  } catch (const ImportError& e) {
    EXPECT_EQ(e.module, "a");
    EXPECT_EQ(e.importer, "b");
  }
}

TEST(Program, MissingModule) {
  EXPECT_THROW(parse_program("a.mtp", memory({{"a", "import nowhere"}})), ImportError);
  EXPECT_THROW(parse_program(fixture_path("misc/absent.mtp")), ImportError);
}

TEST(Program, DiamondParsedOnce) {
  auto resolver = memory({{"a", "import b\nimport c"},
                          {"b", "import d"},
                          {"c", "import d"},
                          {"d", "class D { x: int }"}});
  auto modules = parse_program("a.mtp", resolver);
  std::vector<std::string> names;
  for (const auto& m : modules) names.push_back(m.name);
  EXPECT_EQ(names, (std::vector<std::string>{"a", "b", "d", "c"}));
}

}  // namespace
}  // namespace mtp
