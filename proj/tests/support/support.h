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
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mtp/mtir.h"
#include "mtp/parser.h"
#include "mtp/program.h"
#include "mtp/registry.h"

namespace mtp::testing {

inline std::filesystem::path fixture_path(const std::string& relative) {
  return std::filesystem::path(MTP_FIXTURE_DIR) / relative;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Built {
  std::vector<ModuleAST> modules;
  SemanticRegistry registry;
  MtirMap mtir;
};

inline Built build_program(std::vector<ModuleAST> modules) {
  Built b;
  b.modules = std::move(modules);
  b.registry = build_registry(b.modules);
  b.mtir = build_mtir(b.modules, b.registry);
  return b;
}

inline Built build_fixture(const std::string& relative) {
  return build_program(parse_program(fixture_path(relative)));
}

// In-memory program: module name -> source. The entry is `entry`.mtp.
inline Built build_sources(const std::map<std::string, std::string>& sources,
                           const std::string& entry) {
  ModuleResolver resolver = [&](const std::string& name) -> std::optional<std::string> {
    auto it = sources.find(name);
    if (it == sources.end()) return std::nullopt;
    return it->second;
  };
  return build_program(parse_program(entry + ".mtp", resolver));
}

inline Built build_source(const std::string& source, const std::string& name = "main") {
  return build_sources({{name, source}}, name);
}

inline const MtirEntry& only_entry(const MtirMap& map) {
  if (map.entries.size() != 1) {
    throw std::runtime_error("expected one entry, found " +
                             std::to_string(map.entries.size()));
  }
  return map.entries.begin()->second;
}

}  // namespace mtp::testing
