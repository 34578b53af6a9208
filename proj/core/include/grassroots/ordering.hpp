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

#include <grassroots/blocklace.hpp>

#include <optional>
#include <set>
#include <vector>

namespace grassroots {

struct OrderedLog {
  std::vector<BlockHash> sequence;
  /// The block whose cone was ordered; empty for whole-blocklace orders.
  std::optional<BlockHash> anchor;
};

/// Topological linearization of cone(anchor) plus the anchor itself. Among
/// blocks whose predecessors have all been emitted, the smallest hash goes
/// first. Excluded blocks still constrain the order but are not emitted;
/// exclusions outside the cone are ignored.
/// Throws BlocklaceError("incomplete cone") if the anchor is not resolved.
OrderedLog order_cone(const Blocklace& local, const BlockHash& anchor, const std::set<BlockHash>& exclusions = {});

/// Same rule over every resolved block, as if ordering the cone of a
/// virtual block pointing at all current tips.
OrderedLog order_all(const Blocklace& local, const std::set<BlockHash>& exclusions = {});

}  // namespace grassroots
