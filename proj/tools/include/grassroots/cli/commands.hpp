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

#include <grassroots/cli/report.hpp>
#include <grassroots/netsim.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace grassroots::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInvariant = 3;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> max_ticks;
};

/// A checked simulation: the run itself, the invariants it broke and the
/// rendered artifacts keyed by file name.
struct CheckedRun {
  RunResult result;
  std::vector<std::string> violations;
  std::map<std::string, std::string> files;
};

/// Runs `scenario` with every self-check enabled: per-message cordiality
/// and locality, conservation of every currency in every agent's ledger at
/// every tick, single ruling per equivocation, and trace replay fidelity.
CheckedRun execute(const Scenario& scenario, const Overrides& overrides = {});

std::string render_summary(const Scenario& scenario, const CheckedRun& run);

struct RunCommand {
  std::string scenario_path;
  Overrides overrides;
  std::string out_dir;  // empty: $GRASSROOTS_OUT, else ./grassroots-out
};

struct InspectCommand {
  std::string trace_path;
  std::string query;
  QueryOptions options;
};

int cmd_run(const RunCommand& command, std::ostream& out, std::ostream& err);
int cmd_inspect(const InspectCommand& command, std::ostream& out, std::ostream& err);

/// Entry point for the `grassroots` executable.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace grassroots::cli
