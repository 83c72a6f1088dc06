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

#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "mtp/cli.h"
#include "support.h"

namespace mtp {
namespace {

using testing::fixture_path;
using testing::read_file;

struct CliRun {
  int status;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int status = run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

std::string fx(const std::string& rel) { return fixture_path(rel).string(); }

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("mtp_cli_" + std::to_string(::getpid()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

TEST(Cli, BuildSummary) {
  CliRun r = cli({"build", fx("game/game.mtp")});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out,
            "1 by-site(s)\n"
            "game:3:55  function  get_next_level  4 type(s): Level, Map, Wall, Position\n");
}

TEST(Cli, SyntaxErrorExitsTwo) {
  TempDir dir;
  std::ofstream(dir.file("bad.mtp")) << "def f(x: int -> int by llm\n";
  CliRun r = cli({"build", dir.file("bad.mtp")});
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("1:"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli({}).status, 2);
  EXPECT_EQ(cli({"frobnicate"}).status, 2);
  EXPECT_EQ(cli({"run", fx("person/age_function.mtp")}).status, 2);
  EXPECT_EQ(cli({"build", fx("does/not/exist.mtp")}).status, 2);
}

TEST(Cli, DumpIsByteIdentical) {
  TempDir dir;
  ASSERT_EQ(cli({"dump-mtir", fx("game/game.mtp"), dir.file("a.json")}).status, 0);
  ASSERT_EQ(cli({"dump-mtir", fx("game/game.mtp"), dir.file("b.json")}).status, 0);
  EXPECT_EQ(read_file(dir.file("a.json")), read_file(dir.file("b.json")));
  EXPECT_EQ(read_file(dir.file("a.json")), read_file(fx("game/game.mtir.json")));
  CliRun to_stdout = cli({"dump-mtir", fx("game/game.mtp")});
  EXPECT_EQ(to_stdout.out, read_file(fx("game/game.mtir.json")));
}

TEST(Cli, EmptyProgram) {
  TempDir dir;
  std::ofstream(dir.file("empty.mtp")) << "";
  CliRun b = cli({"build", dir.file("empty.mtp")});
  EXPECT_EQ(b.status, 0);
  EXPECT_EQ(b.out, "0 by-site(s)\n");
  CliRun d = cli({"dump-mtir", dir.file("empty.mtp")});
  EXPECT_EQ(d.out, "{\n  \"entries\": {}\n}\n");
}

TEST(Cli, UnwritableOutput) {
  CliRun r = cli({"dump-mtir", fx("game/game.mtp"), "/nonexistent-dir/out.json"});
  EXPECT_EQ(r.status, 2);
}

TEST(Cli, RunWithMockAndLedger) {
  TempDir dir;
  CliRun r = cli({"run", fx("person/age_function.mtp"), "--backend", "mock", "--mock-script",
                  fx("person/age_function.script"), "--ledger", dir.file("ledger.json")});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, "145\n");
  EXPECT_NE(r.err.find("age_function:1:51"), std::string::npos);
  auto doc = nlohmann::json::parse(read_file(dir.file("ledger.json")));
  EXPECT_EQ(doc["total"]["calls"], 1);
  EXPECT_EQ(doc["sites"]["age_function:1:51"]["completion_tokens"], 1);
}

TEST(Cli, RecordThenReplay) {
  TempDir dir;
  CliRun live = cli({"run", fx("game/game.mtp"), "--backend", "mock", "--mock-script",
                     fx("game/game.script"), "--record", dir.file("rec.jsonl")});
  ASSERT_EQ(live.status, 0) << live.err;
  CliRun replay = cli({"run", fx("game/game.mtp"), "--backend", "replay", "--replay",
                       dir.file("rec.jsonl")});
  EXPECT_EQ(replay.status, 0) << replay.err;
  EXPECT_EQ(replay.out, live.out);
  CliRun stored = cli({"run", fx("game/game.mtp"), "--backend", "replay", "--replay",
                       fx("game/game.jsonl")});
  EXPECT_EQ(stored.status, 0) << stored.err;
  EXPECT_EQ(stored.out, live.out);
}

TEST(Cli, ReplayAgainstDifferentProgramFails) {
  CliRun r = cli({"run", fx("person/age_function.mtp"), "--backend", "replay", "--replay",
                  fx("game/game.jsonl")});
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.err.find("replay mismatch"), std::string::npos) << r.err;
}

TEST(Cli, ReplayAndRecordConflict) {
  CliRun r = cli({"run", fx("game/game.mtp"), "--backend", "replay", "--replay",
                  fx("game/game.jsonl"), "--record", "/tmp/x.jsonl"});
  EXPECT_EQ(r.status, 2);
}

TEST(Cli, TypeFailureExitsOne) {
  CliRun r = cli({"run", fx("person/age_function.mtp"), "--backend", "mock", "--mock-script",
                  fx("misc/garbage.script"), "--max-retries", "1"});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("after 2 attempt(s)"), std::string::npos) << r.err;
}

TEST(Cli, ExhaustedScriptExitsThree) {
  CliRun r = cli({"run", fx("person/age_function.mtp"), "--backend", "mock", "--mock-script",
                  fx("misc/empty.script")});
  EXPECT_EQ(r.status, 3);
}

TEST(Cli, HttpWithoutKeyExitsThree) {
  const char* saved = std::getenv("MTP_API_KEY");
  std::string keep = saved ? saved : "";
  ::unsetenv("MTP_API_KEY");
  CliRun r = cli({"run", fx("person/age_function.mtp"), "--backend", "http"});
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.err.find("MTP_API_KEY"), std::string::npos) << r.err;
  if (saved) ::setenv("MTP_API_KEY", keep.c_str(), 1);
}

}  // namespace
}  // namespace mtp
