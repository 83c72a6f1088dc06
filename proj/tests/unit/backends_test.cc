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
#include <httplib.h>

#include <atomic>
#include <filesystem>
#include <json.hpp>
#include <thread>

#include "mtp/backends.h"
#include "mtp/errors.h"
#include "support.h"

namespace mtp {
namespace {

using testing::read_file;

CompletionRequest request(std::string user, Hyperparams hp = {}) {
  CompletionRequest r;
  r.prompt.system = std::string(kSystemMessage);
  r.prompt.user = std::move(user);
  r.model_name = "test-model";
  r.hyperparams = std::move(hp);
  return r;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() /
         ("mtp_backends_" + std::to_string(::getpid()) + "_" + name);
}

TEST(Tokens, WhitespaceCount) {
  EXPECT_EQ(estimate_tokens(""), 0);
  EXPECT_EQ(estimate_tokens("  one\ttwo\n three "), 3);
}

TEST(Mock, ScriptInOrderThenExhausted) {
  MockBackend mock({"first answer", "2"});
  CompletionResult a = mock.complete(request("q1"));
  EXPECT_EQ(a.text, "first answer");
  EXPECT_EQ(a.completion_tokens, 2);
  EXPECT_EQ(a.prompt_tokens, estimate_tokens(request_text(request("q1").prompt)));
  EXPECT_EQ(mock.complete(request("q2")).text, "2");
  EXPECT_THROW(mock.complete(request("q3")), ScriptExhausted);
  EXPECT_EQ(mock.requests().size(), 3u);
  EXPECT_EQ(mock.requests()[1].prompt.user, "q2");
  EXPECT_EQ(mock.results().size(), 2u);
}

TEST(Mock, RulesDoNotConsumeScript) {
  MockBackend mock({"scripted"}, {when_prompt_contains("weather", "sunny")});
  EXPECT_EQ(mock.complete(request("what is the weather")).text, "sunny");
  EXPECT_EQ(mock.complete(request("anything else")).text, "scripted");
  EXPECT_EQ(mock.complete(request("weather again")).text, "sunny");
  EXPECT_EQ(mock.calls(), 3u);
}

TEST(Recording, ReplayReproducesResults) {
  auto path = temp_file("rec.jsonl");
  std::vector<CompletionResult> live;
  {
    auto inner = std::make_shared<MockBackend>(std::vector<std::string>{"A", "line1\nline2 \"q\""});
    RecordingBackend rec(inner, path);
    live.push_back(rec.complete(request("alpha", {{"temperature", Literal(0.5)}})));
    live.push_back(rec.complete(request("beta")));
  }
  auto calls = parse_recording(read_file(path));
  ASSERT_EQ(calls.size(), 2u);
  EXPECT_EQ(calls[0].prompt, "alpha");
  EXPECT_EQ(calls[0].model, "test-model");
  EXPECT_EQ(calls[0].hyperparams.at("temperature"), Literal(0.5));

  ReplayBackend replay(path);
  EXPECT_EQ(replay.complete(request("alpha", {{"temperature", Literal(0.5)}})), live[0]);
  EXPECT_EQ(replay.complete(request("beta")), live[1]);
  EXPECT_EQ(replay.served(), 2u);
  EXPECT_THROW(replay.complete(request("gamma")), ReplayExhausted);
  std::filesystem::remove(path);
}

TEST(Recording, TruncatesExistingFile) {
  auto path = temp_file("trunc.jsonl");
  {
    std::ofstream(path) << "stale\n";
  }
  {
    RecordingBackend rec(std::make_shared<MockBackend>(std::vector<std::string>{"x"}), path);
    rec.complete(request("q"));
  }
  EXPECT_EQ(parse_recording(read_file(path)).size(), 1u);
  std::filesystem::remove(path);
}

TEST(Recording, UnwritablePath) {
  EXPECT_THROW(RecordingBackend(std::make_shared<MockBackend>(std::vector<std::string>{}),
                                "/nonexistent-dir/x.jsonl"),
               ConfigError);
}

TEST(Replay, MismatchNamesRequestAndDifference) {
  RecordedCall c;
  c.system = std::string(kSystemMessage);
  c.prompt = "[Inputs]\nx: int = 1";
  c.model = "test-model";
  c.result = {"5", 3, 1};
  ReplayBackend replay(std::vector<RecordedCall>{c, c});
  EXPECT_EQ(replay.complete(request("[Inputs]\nx: int = 1")).text, "5");
  try {
    replay.complete(request("[Inputs]\nx: int = 2"));
    FAIL();
  } catch (const ReplayMismatch& e) {
    EXPECT_EQ(e.index, 1u);
    EXPECT_NE(e.diff.find("x: int = 2"), std::string::npos);
    EXPECT_EQ(e.exit_status(), 3);
  }
}

TEST(Replay, MalformedRecording) {
  EXPECT_THROW(parse_recording("{\"request\": 1}\n"), FormatError);
  EXPECT_THROW(parse_recording("not json\n"), FormatError);
  EXPECT_TRUE(parse_recording("").empty());
}

class FakeProvider {
 public:
  FakeProvider() {
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeProvider() {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }
  httplib::Server& server() { return server_; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

const char* kChatOk = R"({"choices":[{"message":{"role":"assistant","content":"145"}}],
                          "usage":{"prompt_tokens":812,"completion_tokens":77}})";

HttpOptions options_for(const std::string& url) {
  HttpOptions o;
  o.base_url = url;
  o.api_key = "sk-test";
  o.max_attempts = 3;
  o.initial_backoff = std::chrono::milliseconds(1);
  o.timeout = std::chrono::seconds(5);
  return o;
}

TEST(Http, SuccessUsesProviderUsage) {
  FakeProvider fake;
  nlohmann::json seen;
  std::string auth;
  fake.server().Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    seen = nlohmann::json::parse(req.body);
    auth = req.get_header_value("Authorization");
    res.set_content(kChatOk, "application/json");
  });
  HttpOptions o = options_for(fake.url());
  o.defaults = {{"temperature", Literal(0.2)}, {"max_tokens", Literal(std::int64_t{64})}};
  HttpBackend http(o);
  CompletionResult r = http.complete(request("hello", {{"temperature", Literal(0.7)}}));
  EXPECT_EQ(r, (CompletionResult{"145", 812, 77}));
  EXPECT_EQ(auth, "Bearer sk-test");
  EXPECT_EQ(seen["model"], "test-model");
  EXPECT_EQ(seen["temperature"], 0.7);
  EXPECT_EQ(seen["max_tokens"], 64);
  ASSERT_EQ(seen["messages"].size(), 2u);
  EXPECT_EQ(seen["messages"][0]["role"], "system");
  EXPECT_EQ(seen["messages"][1]["content"], "hello");
}

TEST(Http, ClientErrorIsNotRetried) {
  FakeProvider fake;
  std::atomic<int> hits{0};
  fake.server().Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 401;
    res.set_content(R"({"error":"bad key"})", "application/json");
  });
  HttpBackend http(options_for(fake.url()));
  try {
    http.complete(request("q"));
    FAIL();
  } catch (const ProviderError& e) {
    EXPECT_EQ(e.status, 401);
    EXPECT_EQ(e.exit_status(), 3);
  }
  EXPECT_EQ(hits.load(), 1);
}

TEST(Http, ServerErrorsRetryThenSucceed) {
  FakeProvider fake;
  std::atomic<int> hits{0};
  fake.server().Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    if (++hits < 3) {
      res.status = hits == 1 ? 500 : 429;
      return;
    }
    res.set_content(kChatOk, "application/json");
  });
  HttpBackend http(options_for(fake.url()));
  EXPECT_EQ(http.complete(request("q")).text, "145");
  EXPECT_EQ(hits.load(), 3);
}

TEST(Http, ServerErrorsExhaustBudget) {
  FakeProvider fake;
  std::atomic<int> hits{0};
  fake.server().Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 503;
  });
  HttpBackend http(options_for(fake.url()));
  EXPECT_THROW(http.complete(request("q")), ProviderError);
  EXPECT_EQ(hits.load(), 3);
}

TEST(Http, ConnectionRefused) {
  std::string url;
  {
    FakeProvider gone;
    url = gone.url();
  }
  HttpBackend http(options_for(url));
  EXPECT_THROW(http.complete(request("q")), TransportError);
}

TEST(Http, Configuration) {
  HttpOptions o;
  EXPECT_THROW(HttpBackend{o}, ConfigError);
  try {
    HttpBackend{o};
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.exit_status(), 3);
  }
  o.api_key = "k";
  o.base_url = "not a url";
  EXPECT_THROW(HttpBackend{o}, ConfigError);
}

TEST(Http, ResponseShapes) {
  EXPECT_EQ(parse_chat_response(200, kChatOk).text, "145");
  EXPECT_THROW(parse_chat_response(200, "{}"), ProviderError);
  EXPECT_THROW(parse_chat_response(200, "<html>"), ProviderError);
  // Missing usage falls back to an estimate.
  CompletionResult r =
      parse_chat_response(200, R"({"choices":[{"message":{"content":"a b c"}}]})");
  EXPECT_EQ(r.completion_tokens, 3);
}

TEST(Ledger, Conservation) {
  TokenLedger ledger;
  ledger.record("m:1:1", {"a", 10, 2});
  ledger.record("m:2:1", {"b", 5, 1});
  ledger.record("m:1:1", {"c", 7, 3});
  auto sites = ledger.per_site();
  EXPECT_EQ(sites.at("m:1:1"), (SiteUsage{2, 17, 5}));
  EXPECT_EQ(ledger.total(), (SiteUsage{3, 22, 6}));
  auto doc = nlohmann::json::parse(ledger.to_json());
  EXPECT_EQ(doc["total"]["prompt_tokens"], 22);
  EXPECT_EQ(doc["sites"]["m:2:1"]["calls"], 1);
  std::string text = ledger.to_text();
  EXPECT_NE(text.find("m:1:1"), std::string::npos);
  EXPECT_NE(text.find("total"), std::string::npos);
}

TEST(Ledger, ConcurrentRecording) {
  TokenLedger ledger;
  std::vector<std::thread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 1000; ++i) ledger.record("s" + std::to_string(t % 3), {"", 2, 1});
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(ledger.total(), (SiteUsage{8000, 16000, 8000}));
  std::int64_t calls = 0;
  for (const auto& [site, u] : ledger.per_site()) calls += u.calls;
  EXPECT_EQ(calls, 8000);
}

}  // namespace
}  // namespace mtp
