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

#include <compare>
#include <string>

namespace mtp {

// 1-based line and column (columns count code points).
struct SourceLoc {
  int line = 0;
  int column = 0;

  auto operator<=>(const SourceLoc&) const = default;
};

inline std::string format_loc(SourceLoc loc) {
  return std::to_string(loc.line) + ":" + std::to_string(loc.column);
}

}  // namespace mtp
