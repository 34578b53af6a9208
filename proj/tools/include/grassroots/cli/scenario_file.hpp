// Copyright 2026 The Grassroots Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <grassroots/netsim.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace grassroots::cli {

/// A scenario-file error carrying its location (`file:line: message`).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, int line, const std::string& message)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + message), file_(std::move(file)), line_(line) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_;
};

/// Parses the line-oriented scenario format (see docs/scenario-format.md)
/// and validates the result. Unknown directives, keys and actions are
/// errors. `file` only labels error messages.
Scenario parse_scenario(std::string_view text, const std::string& file = "<scenario>");

Scenario load_scenario(const std::string& path);

}  // namespace grassroots::cli
