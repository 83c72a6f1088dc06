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

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include "mtp/source_loc.h"

namespace mtp {

// Root of every error thrown by the toolkit. `exit_status` follows the CLI
// contract: 1 type error, 2 frontend/registry/program error, 3 backend error.
class Error : public std::runtime_error {
 public:
  Error(const std::string& message, int exit_status)
      : std::runtime_error(message), exit_status_(exit_status) {}

  int exit_status() const noexcept { return exit_status_; }

 private:
  int exit_status_;
};

// ---- frontend ----

class LexError : public Error {
 public:
  LexError(SourceLoc loc, std::string message)
      : Error(format_loc(loc) + ": lex error: " + message, 2),
        loc(loc),
        message(std::move(message)) {}

  SourceLoc loc;
  std::string message;
};

class ParseError : public Error {
 public:
  ParseError(SourceLoc loc, std::string expected, std::string found)
      : Error(format_loc(loc) + ": parse error: expected " + expected +
                  ", found " + found,
              2),
        loc(loc),
        expected(std::move(expected)),
        found(std::move(found)) {}

  SourceLoc loc;
  std::string expected;
  std::string found;
};

class ImportError : public Error {
 public:
  ImportError(std::string module, std::string importer, const std::string& why)
      : Error("import error: module '" + module + "'" +
                  (importer.empty() ? "" : " imported by '" + importer + "'") +
                  ": " + why,
              2),
        module(std::move(module)),
        importer(std::move(importer)) {}

  std::string module;
  std::string importer;
};

// ---- registry ----

class NameError : public Error {
 public:
  NameError(std::string name, std::string module, SourceLoc use_loc,
            const std::string& why = "unresolved name")
      : Error(module + ":" + format_loc(use_loc) + ": name error: " + why +
                  " '" + name + "'",
              2),
        name(std::move(name)),
        module(std::move(module)),
        use_loc(use_loc) {}

  std::string name;
  std::string module;
  SourceLoc use_loc;
};

class DuplicateError : public Error {
 public:
  DuplicateError(std::string name, std::string module, SourceLoc loc,
                 const std::string& what = "definition")
      : Error(module + ":" + format_loc(loc) + ": duplicate " + what + " '" +
                  name + "'",
              2),
        name(std::move(name)),
        module(std::move(module)),
        loc(loc) {}

  std::string name;
  std::string module;
  SourceLoc loc;
};

// ---- mtir ----

// A `by` site whose shape is invalid (e.g. object init that supplies every
// field, or a `by` on a call that is not a class).
class SiteError : public Error {
 public:
  SiteError(std::string site_id, const std::string& message)
      : Error(site_id + ": " + message, 2), site_id(std::move(site_id)) {}

  std::string site_id;
};

class FormatError : public Error {
 public:
  FormatError(std::optional<std::size_t> offset, const std::string& message)
      : Error("format error" +
                  (offset ? " at byte " + std::to_string(*offset) : "") +
                  ": " + message,
              2),
        offset(offset) {}

  std::optional<std::size_t> offset;
};

// ---- prompt / runtime ----

class ArityError : public Error {
 public:
  explicit ArityError(const std::string& message)
      : Error("arity error: " + message, 2) {}
};

class ArgTypeError : public Error {
 public:
  ArgTypeError(std::string site, const std::string& message)
      : Error(site + ": argument type error: " + message, 1),
        site(std::move(site)) {}

  std::string site;
};

// Terminal failure of the corrective retry loop.
class MtpTypeError : public Error {
 public:
  MtpTypeError(std::string site_id, int attempts, std::string last_diagnostic)
      : Error(site_id + ": type error after " + std::to_string(attempts) +
                  " attempt(s): " + last_diagnostic,
              1),
        site_id(std::move(site_id)),
        attempts(attempts),
        last_diagnostic(std::move(last_diagnostic)) {}

  std::string site_id;
  int attempts;
  std::string last_diagnostic;
};

// Interpreter failure unrelated to model output (unknown variable at run
// time, division by zero, bad operand types, ...).
class EvalError : public Error {
 public:
  EvalError(const std::string& where, const std::string& message)
      : Error(where + ": runtime error: " + message, 2) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message, int exit_status = 2)
      : Error("configuration error: " + message, exit_status) {}
};

// ---- backends ----

class BackendError : public Error {
 public:
  explicit BackendError(const std::string& message) : Error(message, 3) {}
};

class ScriptExhausted : public BackendError {
 public:
  explicit ScriptExhausted(std::size_t calls)
      : BackendError("mock script exhausted after " + std::to_string(calls) +
                     " call(s)") {}
};

class ReplayMismatch : public BackendError {
 public:
  ReplayMismatch(std::size_t index, std::string diff)
      : BackendError("replay mismatch at request " + std::to_string(index) +
                     ": " + diff),
        index(index),
        diff(std::move(diff)) {}

  std::size_t index;
  std::string diff;
};

class ReplayExhausted : public BackendError {
 public:
  explicit ReplayExhausted(std::size_t recorded)
      : BackendError("replay exhausted: recording holds " +
                     std::to_string(recorded) + " response(s)") {}
};

class TransportError : public BackendError {
 public:
  explicit TransportError(const std::string& message)
      : BackendError("transport error: " + message) {}
};

class ProviderError : public BackendError {
 public:
  ProviderError(int status, std::string body_excerpt)
      : BackendError("provider error: HTTP " + std::to_string(status) + ": " +
                     body_excerpt),
        status(status),
        body_excerpt(std::move(body_excerpt)) {}

  int status;
  std::string body_excerpt;
};

}  // namespace mtp
