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

#include "mtp/program.h"

#include <fstream>
#include <set>
#include <sstream>

#include "mtp/errors.h"
#include "mtp/parser.h"

namespace mtp {

ModuleResolver directory_resolver(std::filesystem::path dir) {
  return [dir = std::move(dir)](
             const std::string& name) -> std::optional<std::string> {
    std::ifstream in(dir / (name + ".mtp"), std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
  };
}

namespace {

class ProgramLoader {
 public:
  explicit ProgramLoader(const ModuleResolver& resolver) : resolver_(resolver) {}

  void load(const std::string& name, const std::string& importer) {
    if (in_progress_.count(name)) {
      throw ImportError(name, importer, "import cycle");
    }
    if (done_.count(name)) return;
    std::optional<std::string> source = resolver_(name);
    if (!source) throw ImportError(name, importer, "module not found");

    in_progress_.insert(name);
    std::size_t slot = modules_.size();
    modules_.push_back(parse_source(*source, name));
    // Copy: recursion appends to modules_ and may reallocate.
    std::vector<Import> imports = modules_[slot].imports;
    for (const Import& imp : imports) load(imp.module, name);
    in_progress_.erase(name);
    done_.insert(name);
  }

  std::vector<ModuleAST> take() { return std::move(modules_); }

 private:
  const ModuleResolver& resolver_;
  std::set<std::string> in_progress_;
  std::set<std::string> done_;
  std::vector<ModuleAST> modules_;
};

}  // namespace

std::vector<ModuleAST> parse_program(const std::filesystem::path& entry_path,
                                     const ModuleResolver& resolver) {
  ProgramLoader loader(resolver);
  loader.load(entry_path.stem().string(), "");
  return loader.take();
}

std::vector<ModuleAST> parse_program(const std::filesystem::path& entry_path) {
  return parse_program(entry_path, directory_resolver(entry_path.parent_path()));
}

}  // namespace mtp
