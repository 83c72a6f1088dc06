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

#include "mtp/backends.h"

#include <cstdio>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "mtp/errors.h"

namespace mtp {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::int64_t estimate_tokens(std::string_view text) {
  std::int64_t count = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
                       c == '\f' || c == '\v';
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

std::string request_text(const Prompt& prompt) {
  return prompt.system + "\n" + prompt.user;
}

// ---- mock ----

MockRule when_prompt_contains(std::string needle, std::string response) {
  return {[needle = std::move(needle)](const CompletionRequest& r) {
            return r.prompt.user.find(needle) != std::string::npos;
          },
          std::move(response)};
}

MockBackend::MockBackend(std::vector<std::string> script, std::vector<MockRule> rules)
    : script_(std::move(script)), rules_(std::move(rules)) {}

CompletionResult MockBackend::complete(const CompletionRequest& request) {
  std::lock_guard lock(mu_);
  requests_.push_back(request);
  const std::string* text = nullptr;
  for (const MockRule& rule : rules_) {
    if (rule.matches(request)) {
      text = &rule.response;
      break;
    }
  }
  if (!text) {
    if (next_ >= script_.size()) throw ScriptExhausted(requests_.size() - 1);
    text = &script_[next_++];
  }
  CompletionResult result{*text, estimate_tokens(request_text(request.prompt)),
                          estimate_tokens(*text)};
  results_.push_back(result);
  return result;
}

std::vector<CompletionRequest> MockBackend::requests() const {
  std::lock_guard lock(mu_);
  return requests_;
}

std::vector<CompletionResult> MockBackend::results() const {
  std::lock_guard lock(mu_);
  return results_;
}

std::size_t MockBackend::calls() const {
  std::lock_guard lock(mu_);
  return requests_.size();
}

// ---- record / replay ----

namespace {

ojson literal_json(const Literal& lit) {
  return std::visit([](const auto& v) { return ojson(v); }, lit);
}

Literal json_literal(const json& v, const std::string& where) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) return v.get<double>();
  if (v.is_string()) return v.get<std::string>();
  throw FormatError(std::nullopt, where + ": hyperparameter must be a literal");
}

// First differing line of two texts, for mismatch reports.
std::string first_difference(std::string_view expected, std::string_view actual) {
  std::size_t i = 0;
  while (i < expected.size() && i < actual.size() && expected[i] == actual[i]) ++i;
  std::size_t line_start = expected.rfind('\n', i == 0 ? 0 : i - 1);
  line_start = line_start == std::string_view::npos ? 0 : line_start + 1;
  std::size_t line_no = 1;
  for (std::size_t k = 0; k < line_start; ++k) line_no += expected[k] == '\n';
  auto line_at = [&](std::string_view s) {
    if (line_start >= s.size()) return std::string("<end of text>");
    std::size_t end = s.find('\n', line_start);
    return std::string(s.substr(line_start, end == std::string_view::npos
                                                ? std::string_view::npos
                                                : end - line_start));
  };
  return "prompt differs at byte " + std::to_string(i) + " (line " +
         std::to_string(line_no) + "): recorded `" + line_at(expected) +
         "`, actual `" + line_at(actual) + "`";
}

}  // namespace

std::string recording_line(const CompletionRequest& request,
                           const CompletionResult& result) {
  ojson hyper = ojson::object();
  for (const auto& [k, v] : request.hyperparams) hyper[k] = literal_json(v);
  ojson line{
      {"request",
       {{"system", request.prompt.system},
        {"prompt", request.prompt.user},
        {"model", request.model_name},
        {"hyperparams", std::move(hyper)}}},
      {"result",
       {{"text", result.text},
        {"prompt_tokens", result.prompt_tokens},
        {"completion_tokens", result.completion_tokens}}},
  };
  return line.dump() + "\n";
}

std::vector<RecordedCall> parse_recording(std::string_view text) {
  std::vector<RecordedCall> calls;
  std::size_t offset = 0;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(offset, end - offset);
    const std::string where = "record " + std::to_string(calls.size());
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      json doc;
      try {
        doc = json::parse(line);
      } catch (const json::parse_error& e) {
        throw FormatError(offset + e.byte - 1, where + ": " + e.what());
      }
      try {
        RecordedCall call;
        const json& req = doc.at("request");
        call.system = req.at("system").get<std::string>();
        call.prompt = req.at("prompt").get<std::string>();
        call.model = req.at("model").get<std::string>();
        for (const auto& [k, v] : req.at("hyperparams").items()) {
          call.hyperparams[k] = json_literal(v, where);
        }
        const json& res = doc.at("result");
        call.result.text = res.at("text").get<std::string>();
        call.result.prompt_tokens = res.at("prompt_tokens").get<std::int64_t>();
        call.result.completion_tokens = res.at("completion_tokens").get<std::int64_t>();
        calls.push_back(std::move(call));
      } catch (const json::exception& e) {
        throw FormatError(std::nullopt, where + ": " + e.what());
      }
    }
    offset = end + 1;
  }
  return calls;
}

RecordingBackend::RecordingBackend(std::shared_ptr<ModelBackend> inner,
                                   const std::filesystem::path& path)
    : inner_(std::move(inner)), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw ConfigError("cannot write recording file " + path.string());
}

CompletionResult RecordingBackend::complete(const CompletionRequest& request) {
  CompletionResult result = inner_->complete(request);
  std::lock_guard lock(mu_);
  out_ << recording_line(request, result);
  out_.flush();
  return result;
}

ReplayBackend::ReplayBackend(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read replay file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  calls_ = parse_recording(buf.str());
}

ReplayBackend::ReplayBackend(std::vector<RecordedCall> calls)
    : calls_(std::move(calls)) {}

CompletionResult ReplayBackend::complete(const CompletionRequest& request) {
  std::lock_guard lock(mu_);
  if (next_ >= calls_.size()) throw ReplayExhausted(calls_.size());
  const RecordedCall& call = calls_[next_];
  const std::string recorded = call.system + "\n" + call.prompt;
  const std::string actual = request_text(request.prompt);
  if (recorded != actual) {
    throw ReplayMismatch(next_, first_difference(recorded, actual));
  }
  ++next_;
  return call.result;
}

std::size_t ReplayBackend::served() const {
  std::lock_guard lock(mu_);
  return next_;
}

// ---- http ----

namespace {

std::string excerpt(std::string_view body) {
  constexpr std::size_t kMax = 200;
  std::string out(body.substr(0, kMax));
  if (body.size() > kMax) out += "...";
  return out;
}

}  // namespace

HttpBackend::HttpBackend(HttpOptions options) : options_(std::move(options)) {
  if (options_.api_key.empty()) {
    throw ConfigError("http backend needs an API key (MTP_API_KEY)", 3);
  }
  const std::string& url = options_.base_url;
  std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("malformed base URL '" + url + "'", 3);
  }
  std::size_t path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  if (scheme_host_port_.size() <= scheme_end + 3) {
    throw ConfigError("malformed base URL '" + url + "'", 3);
  }
}

std::string HttpBackend::request_body(const CompletionRequest& request) const {
  Hyperparams merged = options_.defaults;
  for (const auto& [k, v] : request.hyperparams) merged[k] = v;
  ojson body{
      {"model", request.model_name},
      {"messages",
       ojson::array({{{"role", "system"}, {"content", request.prompt.system}},
                     {{"role", "user"}, {"content", request.prompt.user}}})},
  };
  for (const auto& [k, v] : merged) body[k] = literal_json(v);
  return body.dump();
}

CompletionResult parse_chat_response(int status, std::string_view body) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded()) throw ProviderError(status, "unparseable body: " + excerpt(body));
  try {
    CompletionResult result;
    const json& content = doc.at("choices").at(0).at("message").at("content");
    result.text = content.is_string() ? content.get<std::string>() : "";
    auto usage = doc.find("usage");
    if (usage != doc.end() && usage->is_object()) {
      result.prompt_tokens = usage->value("prompt_tokens", std::int64_t{0});
      result.completion_tokens = usage->value("completion_tokens", std::int64_t{0});
    } else {
      result.completion_tokens = estimate_tokens(result.text);
    }
    return result;
  } catch (const json::exception&) {
    throw ProviderError(status, "unexpected response shape: " + excerpt(body));
  }
}

CompletionResult HttpBackend::complete(const CompletionRequest& request) {
  const std::string body = request_body(request);
  const std::string path = path_prefix_ + "/chat/completions";
  httplib::Headers headers{{"Authorization", "Bearer " + options_.api_key}};
  auto backoff = options_.initial_backoff;
  std::string last_problem;
  int last_status = 0;
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    if (attempt > 1) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(options_.timeout);
    client.set_read_timeout(options_.timeout);
    client.set_write_timeout(options_.timeout);
    auto res = client.Post(path, headers, body, "application/json");
    if (!res) {
      last_status = 0;
      last_problem = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) {
      CompletionResult result = parse_chat_response(res->status, res->body);
      if (result.prompt_tokens == 0) result.prompt_tokens = estimate_tokens(request_text(request.prompt));
      return result;
    }
    if (res->status == 429 || res->status >= 500) {
      last_status = res->status;
      last_problem = excerpt(res->body);
      continue;
    }
    throw ProviderError(res->status, excerpt(res->body));
  }
  if (last_status != 0) throw ProviderError(last_status, last_problem);
  throw TransportError(scheme_host_port_ + path + ": " + last_problem + " after " +
                       std::to_string(options_.max_attempts) + " attempt(s)");
}

// ---- ledger ----

void TokenLedger::record(std::string_view site_id, const CompletionResult& result) {
  std::lock_guard lock(mu_);
  SiteUsage& site = sites_[std::string(site_id)];
  for (SiteUsage* u : {&site, &total_}) {
    u->calls += 1;
    u->prompt_tokens += result.prompt_tokens;
    u->completion_tokens += result.completion_tokens;
  }
}

SiteUsage TokenLedger::total() const {
  std::lock_guard lock(mu_);
  return total_;
}

std::map<std::string, SiteUsage> TokenLedger::per_site() const {
  std::lock_guard lock(mu_);
  return sites_;
}

std::string TokenLedger::to_text() const {
  std::lock_guard lock(mu_);
  std::size_t width = 5;
  for (const auto& [site, _] : sites_) width = std::max(width, site.size());
  std::string out;
  auto row = [&](const std::string& name, const std::string& calls,
                 const std::string& prompt, const std::string& completion) {
    char buf[64];
    out += name + std::string(width - name.size() + 2, ' ');
    std::snprintf(buf, sizeof buf, "%6s %10s %10s\n", calls.c_str(),
                  prompt.c_str(), completion.c_str());
    out += buf;
  };
  row("site", "calls", "prompt", "completion");
  auto numbers = [&](const std::string& name, const SiteUsage& u) {
    row(name, std::to_string(u.calls), std::to_string(u.prompt_tokens),
        std::to_string(u.completion_tokens));
  };
  for (const auto& [site, u] : sites_) numbers(site, u);
  numbers("total", total_);
  return out;
}

std::string TokenLedger::to_json() const {
  std::lock_guard lock(mu_);
  auto usage = [](const SiteUsage& u) {
    return ojson{{"calls", u.calls},
                 {"prompt_tokens", u.prompt_tokens},
                 {"completion_tokens", u.completion_tokens}};
  };
  ojson sites = ojson::object();
  for (const auto& [site, u] : sites_) sites[site] = usage(u);
  ojson doc{{"sites", std::move(sites)}, {"total", usage(total_)}};
  return doc.dump(2) + "\n";
}

}  // namespace mtp
