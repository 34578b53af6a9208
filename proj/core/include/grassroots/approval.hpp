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

#include <cstdint>
#include <set>
#include <span>

namespace grassroots {

/// n agents, at most f of them faulty.
struct FaultConfig {
  std::uint32_t n = 1;
  std::uint32_t f = 0;
  /// When set, validate() also demands n > 3f.
  bool classical = true;

  /// Throws std::invalid_argument unless 0 <= f < n (and n > 3f if classical).
  void validate() const;
};

/// Least integer strictly greater than (n + f) / 2.
std::uint32_t supermajority_threshold(const FaultConfig& cfg);

struct ApprovalRecord {
  BlockHash block;
  std::set<AgentId> approvers;
};

/// p approves b iff some p-block has b in its cone and no block
/// equivocating with b in its cone. `b` must be resolved.
bool approves(const Blocklace& local, const AgentId& p, const BlockHash& b);

ApprovalRecord approval_record(const Blocklace& local, const BlockHash& b, std::span<const AgentId> roster);

bool supermajority_approved(const Blocklace& local, const BlockHash& b, const FaultConfig& cfg,
                            std::span<const AgentId> roster);

}  // namespace grassroots
