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

#include <string>

#include "mtp/ast.h"

namespace mtp {

// Canonical source text for a module: imports, then declarations, then
// top-level statements. Binary expressions are fully parenthesized so the
// output re-parses to the same tree.
std::string print_module(const ModuleAST& module);

std::string print_expr(const Expr& expr);

std::string print_by_clause(const ByClause& by);

}  // namespace mtp
