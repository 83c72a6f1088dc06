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

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mtp/ast.h"

namespace mtp {

// Maps a module name to its source text; nullopt when it does not exist.
using ModuleResolver =
    std::function<std::optional<std::string>(const std::string& module_name)>;

// Resolves `name` to `<dir>/<name>.mtp`.
ModuleResolver directory_resolver(std::filesystem::path dir);

// Parses the entry module (named after the file stem and loaded through
// `resolver`) and every module it imports transitively, each exactly once,
// in depth-first pre-order by first import occurrence. Cyclic or
// unresolvable imports raise ImportError.
std::vector<ModuleAST> parse_program(const std::filesystem::path& entry_path,
                                     const ModuleResolver& resolver);

// Same, resolving imports next to the entry file.
std::vector<ModuleAST> parse_program(const std::filesystem::path& entry_path);

}  // namespace mtp
