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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "mtp/ast.h"
#include "mtp/prompt.h"

namespace mtp {

using Hyperparams = std::map<std::string, Literal>;

struct CompletionRequest {
  Prompt prompt;
  std::string model_name;
  Hyperparams hyperparams;
};

struct CompletionResult {
  std::string text;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;

  bool operator==(const CompletionResult&) const = default;
};

// Implementations must accept concurrent complete() calls.
class ModelBackend {
 public:
  virtual ~ModelBackend() = default;
  virtual CompletionResult complete(const CompletionRequest& request) = 0;
};

// Number of whitespace-separated tokens.
std::int64_t estimate_tokens(std::string_view text);

// system + "\n" + user, the text that estimators count and replay compares.
std::string request_text(const Prompt& prompt);

struct MockRule {
  std::function<bool(const CompletionRequest&)> matches;
  std::string response;
};

MockRule when_prompt_contains(std::string needle, std::string response);

// Answers from the first matching rule, else the next script entry. Every
// request is recorded.
class MockBackend : public ModelBackend {
 public:
  explicit MockBackend(std::vector<std::string> script,
                       std::vector<MockRule> rules = {});

  CompletionResult complete(const CompletionRequest& request) override;

  std::vector<CompletionRequest> requests() const;
  std::vector<CompletionResult> results() const;
  std::size_t calls() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::string> script_;
  std::vector<MockRule> rules_;
  std::size_t next_ = 0;
  std::vector<CompletionRequest> requests_;
  std::vector<CompletionResult> results_;
};

// Wraps `inner` and writes one JSON line per call. The file is truncated
// when the backend is created.
class RecordingBackend : public ModelBackend {
 public:
  RecordingBackend(std::shared_ptr<ModelBackend> inner,
                   const std::filesystem::path& path);

  CompletionResult complete(const CompletionRequest& request) override;

 private:
  std::shared_ptr<ModelBackend> inner_;
  std::mutex mu_;
  std::ofstream out_;
};

struct RecordedCall {
  std::string system;
  std::string prompt;
  std::string model;
  Hyperparams hyperparams;
  CompletionResult result;
};

// Serves recorded results in order after checking the prompt text.
class ReplayBackend : public ModelBackend {
 public:
  explicit ReplayBackend(const std::filesystem::path& path);
  explicit ReplayBackend(std::vector<RecordedCall> calls);

  CompletionResult complete(const CompletionRequest& request) override;

  std::size_t served() const;

 private:
  mutable std::mutex mu_;
  std::vector<RecordedCall> calls_;
  std::size_t next_ = 0;
};

std::string recording_line(const CompletionRequest& request,
                           const CompletionResult& result);
// Throws FormatError.
std::vector<RecordedCall> parse_recording(std::string_view text);

struct HttpOptions {
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key;
  Hyperparams defaults;  // lowest precedence
  int max_attempts = 4;  // transport-level, independent of semantic retries
  std::chrono::milliseconds initial_backoff{250};
  std::chrono::seconds timeout{60};
};

// OpenAI-compatible chat completions client.
class HttpBackend : public ModelBackend {
 public:
  explicit HttpBackend(HttpOptions options);

  CompletionResult complete(const CompletionRequest& request) override;

  // Request body for `request`, exposed for tests.
  std::string request_body(const CompletionRequest& request) const;

 private:
  HttpOptions options_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

// Throws ProviderError(status, ...) when `body` is not a usable response.
CompletionResult parse_chat_response(int status, std::string_view body);

struct SiteUsage {
  std::int64_t calls = 0;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;

  bool operator==(const SiteUsage&) const = default;
};

// Per-site and total token accounting; safe for concurrent record().
class TokenLedger {
 public:
  void record(std::string_view site_id, const CompletionResult& result);

  SiteUsage total() const;
  std::map<std::string, SiteUsage> per_site() const;

  // Fixed-column table, one row per site plus a total row.
  std::string to_text() const;
  std::string to_json() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, SiteUsage> sites_;
  SiteUsage total_;
};

}  // namespace mtp
