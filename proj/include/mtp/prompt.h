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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mtp/mtir.h"
#include "mtp/values.h"

namespace mtp {

struct PromptInput {
  std::string name;
  std::string type;      // source type syntax
  std::string rendered;  // constructor-expression text

  bool operator==(const PromptInput&) const = default;
};

struct PromptSections {
  std::string action;
  std::string signature;
  std::vector<std::string> type_explanations;  // one schema line each
  std::vector<PromptInput> inputs;
  std::optional<std::string> receiver;  // rendered object, methods only
  std::string instructions;             // from the `instructions` hyperparameter
  std::string output_instruction;

  bool operator==(const PromptSections&) const = default;
};

struct CorrectionSections {
  std::string prior_output;
  std::string diagnostic;
  std::string expected_schema;

  bool operator==(const CorrectionSections&) const = default;
};

struct Prompt {
  std::string system;
  std::string user;
  PromptSections sections;
  std::optional<CorrectionSections> correction;

  bool operator==(const Prompt&) const = default;
};

using BoundValues = std::vector<std::pair<std::string, Value>>;

extern const std::string_view kSystemMessage;

// "get_next_level" -> "get next level", "calculateAge" -> "calculate age".
std::string identifier_words(std::string_view identifier);

// Throws ArityError when `bound` does not list exactly the entry's params in
// order, or when a receiver is given for a non-method site or missing for a
// method site.
Prompt synthesize_prompt(const MtirEntry& entry, const BoundValues& bound,
                         const Value* receiver = nullptr);

// Follow-up prompt after a failed conversion: the prior output verbatim,
// the diagnostic and the expected schema. Inputs and the full type closure
// are left out.
Prompt synthesize_correction_prompt(const MtirEntry& entry,
                                    std::string_view prior_output,
                                    std::string_view diagnostic);

}  // namespace mtp
