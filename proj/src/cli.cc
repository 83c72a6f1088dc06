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

#include "mtp/cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "mtp/backends.h"
#include "mtp/errors.h"
#include "mtp/mtir.h"
#include "mtp/program.h"
#include "mtp/registry.h"
#include "mtp/runtime.h"

namespace mtp {

namespace {

struct Compiled {
  std::vector<ModuleAST> modules;
  MtirMap mtir;
};

Compiled compile(const std::string& entry) {
  Compiled c;
  c.modules = parse_program(entry);
  SemanticRegistry registry = build_registry(c.modules);
  c.mtir = build_mtir(c.modules, registry);
  return c;
}

void write_file(const std::string& path, const std::string& content,
                const std::string& what) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + what + " to " + path);
  out << content;
  if (!out.flush()) throw ConfigError("cannot write " + what + " to " + path);
}

std::vector<std::string> read_script(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read mock script " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

void print_summary(const MtirMap& mtir, std::ostream& out) {
  out << mtir.entries.size() << " by-site(s)\n";
  for (const auto& [site_id, e] : mtir.entries) {
    out << site_id << "  " << call_site_kind_name(e.kind) << "  " << e.subject
        << "  " << e.types.size() << " type(s)";
    for (std::size_t i = 0; i < e.types.size(); ++i) {
      out << (i ? ", " : ": ") << e.types[i].name;
    }
    out << "\n";
  }
}

struct RunFlags {
  std::string backend;
  std::string mock_script;
  std::string replay;
  std::string record;
  std::string model;
  int max_retries = 3;
  std::string ledger;
  std::string dump_mtir;
};

std::shared_ptr<ModelBackend> make_backend(const RunFlags& flags) {
  std::shared_ptr<ModelBackend> backend;
  if (flags.backend == "mock") {
    if (flags.mock_script.empty()) throw ConfigError("--backend mock needs --mock-script");
    backend = std::make_shared<MockBackend>(read_script(flags.mock_script));
  } else if (flags.backend == "replay") {
    if (flags.replay.empty()) throw ConfigError("--backend replay needs --replay");
    backend = std::make_shared<ReplayBackend>(flags.replay);
  } else {
    const char* key = std::getenv("MTP_API_KEY");
    if (!key || !*key) throw ConfigError("MTP_API_KEY is not set for --backend http", 3);
    HttpOptions options;
    options.api_key = key;
    if (const char* base = std::getenv("MTP_BASE_URL"); base && *base) {
      options.base_url = base;
    }
    backend = std::make_shared<HttpBackend>(std::move(options));
  }
  if (!flags.record.empty()) {
    backend = std::make_shared<RecordingBackend>(backend, flags.record);
  }
  return backend;
}

int cmd_run(const std::string& entry, const RunFlags& flags, std::ostream& out,
            std::ostream& err) {
  if (flags.max_retries < 0) throw ConfigError("--max-retries must be >= 0");
  Compiled c = compile(entry);
  if (!flags.dump_mtir.empty()) write_file(flags.dump_mtir, serialize_mtir(c.mtir), "MT-IR");

  RunConfig config;
  config.max_retries = flags.max_retries;
  if (!flags.model.empty()) config.model_name = flags.model;
  std::shared_ptr<ModelBackend> backend = make_backend(flags);
  for (const auto& [site_id, e] : c.mtir.entries) config.backends[e.model] = backend;

  RunResult result = run_program(c.modules, c.mtir, config);
  out << result.stdout_text;
  out.flush();
  if (!result.diagnostic.empty()) err << "error: " << result.diagnostic << "\n";
  err << result.ledger->to_text();
  if (!flags.ledger.empty()) write_file(flags.ledger, result.ledger->to_json(), "ledger");
  return result.exit_status;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Compiler and runtime for by-delegating MTP programs", "mtpc"};
  app.require_subcommand(1);

  std::string entry;
  std::string out_path;
  RunFlags flags;

  CLI::App* build = app.add_subcommand("build", "Parse, resolve and summarize by-sites");
  build->add_option("entry", entry, "Entry .mtp file")->required();
  build->add_option("--dump-mtir", flags.dump_mtir, "Write the canonical MT-IR here");

  CLI::App* dump = app.add_subcommand("dump-mtir", "Write the canonical MT-IR");
  dump->add_option("entry", entry, "Entry .mtp file")->required();
  dump->add_option("out", out_path, "Output file (stdout when omitted)");

  CLI::App* run = app.add_subcommand("run", "Execute a program");
  run->add_option("entry", entry, "Entry .mtp file")->required();
  run->add_option("--backend", flags.backend, "Model backend")
      ->required()
      ->check(CLI::IsMember({"mock", "replay", "http"}));
  run->add_option("--mock-script", flags.mock_script, "One response per line");
  auto* replay = run->add_option("--replay", flags.replay, "Recording to replay");
  auto* record = run->add_option("--record", flags.record, "Record calls to this file");
  replay->excludes(record);
  run->add_option("--model", flags.model, "Model name sent to the backend");
  run->add_option("--max-retries", flags.max_retries, "Corrective retries per by-call");
  run->add_option("--ledger", flags.ledger, "Write the token ledger as JSON");
  run->add_option("--dump-mtir", flags.dump_mtir, "Write the canonical MT-IR here");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (build->parsed()) {
      Compiled c = compile(entry);
      print_summary(c.mtir, out);
      if (!flags.dump_mtir.empty()) {
        write_file(flags.dump_mtir, serialize_mtir(c.mtir), "MT-IR");
      }
      return 0;
    }
    if (dump->parsed()) {
      Compiled c = compile(entry);
      std::string text = serialize_mtir(c.mtir);
      if (out_path.empty()) {
        out << text;
      } else {
        write_file(out_path, text, "MT-IR");
      }
      return 0;
    }
    return cmd_run(entry, flags, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_status();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace mtp
