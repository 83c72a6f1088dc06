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

#include "mtp/prompt.h"

#include <cctype>

#include "mtp/errors.h"

namespace mtp {

const std::string_view kSystemMessage =
    "You are a typed function inside a running program: answer with exactly "
    "one value in the requested format and nothing else.";

std::string identifier_words(std::string_view identifier) {
  std::vector<std::string> words;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) words.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < identifier.size(); ++i) {
    const char c = identifier[i];
    if (c == '_' || c == '.') {
      flush();
      continue;
    }
    const bool upper = std::isupper(static_cast<unsigned char>(c));
    if (upper && !current.empty()) {
      const char prev = identifier[i - 1];
      const bool prev_lower = std::islower(static_cast<unsigned char>(prev)) ||
                              std::isdigit(static_cast<unsigned char>(prev));
      const bool next_lower =
          i + 1 < identifier.size() &&
          std::islower(static_cast<unsigned char>(identifier[i + 1]));
      if (prev_lower || (std::isupper(static_cast<unsigned char>(prev)) && next_lower)) {
        flush();
      }
    }
    current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  flush();
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out;
}

namespace {

std::string_view method_name(std::string_view subject) {
  std::size_t dot = subject.rfind('.');
  return dot == std::string_view::npos ? subject : subject.substr(dot + 1);
}

std::string join_slots(const std::vector<Slot>& slots) {
  std::string out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (i) out += ", ";
    out += slots[i].name + ": " + slots[i].type.to_string();
  }
  return out;
}

std::string action_text(const MtirEntry& entry) {
  switch (entry.kind) {
    case CallSiteKind::FunctionDef: return identifier_words(entry.subject);
    case CallSiteKind::MethodDef: return identifier_words(method_name(entry.subject));
    case CallSiteKind::ObjectInit: {
      std::string missing;
      for (std::size_t i = 0; i < entry.outputs.size(); ++i) {
        if (i) missing += ", ";
        missing += entry.outputs[i].name;
      }
      return "complete " + identifier_words(entry.subject) + " by filling in " +
             missing;
    }
  }
  return entry.subject;
}

std::string signature_text(const MtirEntry& entry) {
  if (entry.kind == CallSiteKind::ObjectInit) {
    return entry.subject + "(" + join_slots(entry.params) + ") -> fill in (" +
           join_slots(entry.outputs) + ")";
  }
  return entry.subject + "(" + join_slots(entry.params) + ") -> " +
         entry.outputs.at(0).type.to_string();
}

std::string value_form(const TypeExpr& t) {
  switch (t.kind) {
    case TypeExpr::Kind::Primitive:
      switch (t.primitive) {
        case PrimitiveType::Int: return "a bare int literal (for example 42)";
        case PrimitiveType::Float:
          return "a bare float literal with a decimal point (for example 3.5)";
        case PrimitiveType::Str:
          return "a double-quoted string literal (for example \"text\")";
        case PrimitiveType::Bool: return "the bare literal true or false";
      }
      break;
    case TypeExpr::Kind::Named:
      return "a constructor expression " + t.name +
             "(field=value, ...) naming every field of " + t.name;
    case TypeExpr::Kind::List:
      return "a list literal [item, ...] of type " + t.to_string();
    case TypeExpr::Kind::Map:
      return "a map literal {key: value, ...} of type " + t.to_string();
  }
  return t.to_string();
}

const std::string kValueSyntax =
    "Write values as in the inputs: strings in double quotes, lists as "
    "[a, b], maps as {k: v}, objects as Name(field=value, ...).";

std::string output_instruction(const MtirEntry& entry) {
  std::string head;
  if (entry.kind == CallSiteKind::ObjectInit) {
    head = "Respond with only a complete " + entry.subject +
           "(...) constructor expression that gives every field of " +
           entry.subject + " by name, including the given ones.";
  } else {
    head = "Respond with only " + value_form(entry.expected_output()) + ".";
  }
  return head + " " + kValueSyntax;
}

std::string instructions_text(const MtirEntry& entry) {
  auto it = entry.hyperparams.find("instructions");
  if (it == entry.hyperparams.end()) return "";
  if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
  return "";
}

void section(std::string& out, std::string_view title, std::string_view body) {
  if (body.empty()) return;
  if (!out.empty()) out += "\n";
  out += "[";
  out += title;
  out += "]\n";
  out += body;
  if (body.back() != '\n') out += "\n";
}

std::string lines(const std::vector<std::string>& items) {
  std::string out;
  for (const std::string& s : items) out += s + "\n";
  return out;
}

void collect_named(const TypeExpr& t, std::vector<std::string>& names) {
  if (t.kind == TypeExpr::Kind::Named) {
    for (const std::string& n : names) {
      if (n == t.name) return;
    }
    names.push_back(t.name);
    return;
  }
  for (const TypeExpr& a : t.args) collect_named(a, names);
}

const TypeSchema* schema_named(const MtirEntry& entry, std::string_view name) {
  for (const TypeSchema& s : entry.types) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

}  // namespace

Prompt synthesize_prompt(const MtirEntry& entry, const BoundValues& bound,
                         const Value* receiver) {
  if (bound.size() != entry.params.size()) {
    throw ArityError(entry.site_id + ": " + entry.subject + " expects " +
                     std::to_string(entry.params.size()) + " value(s), got " +
                     std::to_string(bound.size()));
  }
  const bool is_method = entry.kind == CallSiteKind::MethodDef;
  if (is_method != (receiver != nullptr)) {
    throw ArityError(entry.site_id + ": " +
                     (is_method ? "method call without a receiver"
                                : "receiver given for a non-method site"));
  }

  Prompt p;
  p.system = std::string(kSystemMessage);
  PromptSections& s = p.sections;
  s.action = action_text(entry);
  s.signature = signature_text(entry);
  for (const TypeSchema& t : entry.types) s.type_explanations.push_back(t.to_string());
  for (std::size_t i = 0; i < bound.size(); ++i) {
    if (bound[i].first != entry.params[i].name) {
      throw ArityError(entry.site_id + ": expected value for '" +
                       entry.params[i].name + "', got '" + bound[i].first + "'");
    }
    s.inputs.push_back({bound[i].first, entry.params[i].type.to_string(),
                        render_value(bound[i].second)});
  }
  if (receiver) s.receiver = render_value(*receiver);
  s.instructions = instructions_text(entry);
  s.output_instruction = output_instruction(entry);

  std::string inputs;
  for (const PromptInput& in : s.inputs) {
    inputs += in.name + ": " + in.type + " = " + in.rendered + "\n";
  }
  std::string& u = p.user;
  section(u, "Action", s.action);
  section(u, "Signature", s.signature);
  section(u, "Type_Explanations", lines(s.type_explanations));
  section(u, "Inputs", inputs);
  if (s.receiver) section(u, "Self", *s.receiver);
  section(u, "Instructions", s.instructions);
  section(u, "Output_Format", s.output_instruction);
  return p;
}

Prompt synthesize_correction_prompt(const MtirEntry& entry,
                                    std::string_view prior_output,
                                    std::string_view diagnostic) {
  Prompt p;
  p.system = std::string(kSystemMessage);
  p.sections.action = action_text(entry);
  p.sections.output_instruction = output_instruction(entry);

  const TypeExpr expected = entry.expected_output();
  std::string schema = expected.to_string() + "\n";
  std::vector<std::string> names;
  collect_named(expected, names);
  for (const std::string& n : names) {
    if (const TypeSchema* t = schema_named(entry, n)) schema += t->to_string() + "\n";
  }
  CorrectionSections c{std::string(prior_output), std::string(diagnostic), schema};

  std::string& u = p.user;
  section(u, "Action", p.sections.action);
  u += "\n[Previous_Output]\n";
  u += c.prior_output;
  u += "\n";
  section(u, "Problem", c.diagnostic);
  section(u, "Expected_Schema", c.expected_schema);
  section(u, "Output_Format", p.sections.output_instruction);
  p.correction = std::move(c);
  return p;
}

}  // namespace mtp
