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

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "mtp/backends.h"
#include "mtp/mtir.h"
#include "mtp/prompt.h"
#include "mtp/values.h"

namespace mtp {

struct RunConfig {
  int max_retries = 3;
  // model_ref -> backend. Every model_ref in the MT-IR needs a binding.
  std::map<std::string, std::shared_ptr<ModelBackend>, std::less<>> backends;
  // Model name sent to the backend when the by-clause does not set one.
  // Falls back to the model_ref itself.
  std::optional<std::string> model_name;
  Hyperparams default_hyperparams;
  std::shared_ptr<TokenLedger> ledger;  // created per run when null
  // Called with every value a by-site returns, after its type check.
  std::function<void(const MtirEntry&, const Value&)> on_return;
};

struct RunResult {
  std::string stdout_text;
  std::shared_ptr<TokenLedger> ledger;
  int exit_status = 0;
  std::string diagnostic;  // empty on success
};

// By-clause keys consumed by the runtime rather than sent to the backend.
bool is_reserved_hyperparam(std::string_view name);

// By-clause `max_retries` if set, else the configured value.
int effective_max_retries(const MtirEntry& entry, const RunConfig& config);

// By-clause `model` > config.model_name > entry.model.
std::string effective_model_name(const MtirEntry& entry, const RunConfig& config);

// Backend hyperparameters: config defaults overlaid by the by-clause, minus
// reserved keys.
Hyperparams effective_hyperparams(const MtirEntry& entry, const RunConfig& config);

// Checks the bound values, then loops prompt -> backend -> parse for up to
// 1 + max_retries attempts. Throws ArgTypeError before any backend call,
// MtpTypeError once attempts run out, ConfigError when no backend is bound.
Value invoke_model(const MtirEntry& entry, const BoundValues& bound,
                   const Value* receiver, const RunConfig& config,
                   TokenLedger& ledger);

// Object initialization by a model: `provided` lists the developer's
// values for entry.params, in order. They win over the model's output.
Value eval_object_init_by(const MtirEntry& entry, const BoundValues& provided,
                          const RunConfig& config, TokenLedger& ledger);

// Runs the entry module's top-level statements. `modules[0]` is the entry.
// Never throws; failures are reported through exit_status and diagnostic.
RunResult run_program(std::span<const ModuleAST> modules, const MtirMap& mtir,
                      const RunConfig& config);

}  // namespace mtp
