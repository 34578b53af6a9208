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

// Plain-text views of final agent states. Every view depends only on the
// set of blocks each agent holds, so a run and a replay of its trace render
// identically.

#include <grassroots/netsim.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace grassroots::cli {

class QueryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Query { kFeed, kLedger, kGraph, kEquivocations, kOrder, kMetrics };

std::optional<Query> parse_query(std::string_view text);
std::string_view to_string(Query q);
/// Queries dumped by `run`, in file order.
const std::vector<Query>& all_queries();

struct QueryOptions {
  std::optional<std::string> agent;   // agent name
  std::optional<std::string> anchor;  // label, full hash or unique hash prefix
};

/// Final states of a finished run, in the same shape a trace replay yields.
ReplayedRun final_state(const RunResult& run, ProtocolKind protocol);

/// Throws QueryError on an unknown agent or an unresolvable anchor.
std::string render(const ReplayedRun& state, Query query, const QueryOptions& options = {});

/// Resolves a label, a full hash or a unique prefix among blocks in `local`.
BlockHash resolve_anchor(const ReplayedRun& state, const Blocklace& local, const std::string& anchor);

}  // namespace grassroots::cli
