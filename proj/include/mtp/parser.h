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

#include <span>
#include <string>
#include <string_view>

#include "mtp/ast.h"
#include "mtp/lexer.h"

namespace mtp {

// Recursive-descent parser over a token stream from tokenize(). Throws
// ParseError on malformed input and DuplicateError when a module, class,
// parameter list, argument list or by-clause repeats a name.
ModuleAST parse_module(std::span<const Token> tokens, std::string name);

// Convenience: tokenize + parse_module.
ModuleAST parse_source(std::string_view source, std::string name);

// Parses a standalone type in source syntax ("list[Level]").
TypeExpr parse_type_text(std::string_view text);

}  // namespace mtp
