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

#include <grassroots/approval.hpp>

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace grassroots {

void FaultConfig::validate() const {
  if (n == 0) throw std::invalid_argument("fault config: n must be positive");
  if (f >= n) throw std::invalid_argument("fault config: f must be less than n");
  if (classical && n <= 3 * f) throw std::invalid_argument("fault config: n must exceed 3f");
}

std::uint32_t supermajority_threshold(const FaultConfig& cfg) { return (cfg.n + cfg.f) / 2 + 1; }

bool approves(const Blocklace& local, const AgentId& p, const BlockHash& b) {
  if (!local.is_resolved(b)) throw BlocklaceError("incomplete cone");
  auto mine = local.blocks_by(p);
  if (mine.empty()) return false;
  auto rivals = local.equivocating_with(b);

  // Ascending seq: for a correct p the cones are nested, so the first block
  // that reaches b has the smallest cone and decides the question.
  std::vector<BlockHash> order(mine.begin(), mine.end());
  std::stable_sort(order.begin(), order.end(),
                   [&](const BlockHash& x, const BlockHash& y) { return local.at(x).seq < local.at(y).seq; });
  for (const auto& candidate : order) {
    auto cone = local.cone_set(candidate);
    if (!cone.contains(b)) continue;
    bool clean = std::none_of(rivals.begin(), rivals.end(), [&](const BlockHash& r) { return cone.contains(r); });
    if (clean) return true;
  }
  return false;
}

ApprovalRecord approval_record(const Blocklace& local, const BlockHash& b, std::span<const AgentId> roster) {
  ApprovalRecord rec{b, {}};
  for (const auto& p : roster)
    if (approves(local, p, b)) rec.approvers.insert(p);
  return rec;
}

bool supermajority_approved(const Blocklace& local, const BlockHash& b, const FaultConfig& cfg,
                            std::span<const AgentId> roster) {
  return approval_record(local, b, roster).approvers.size() >= supermajority_threshold(cfg);
}

}  // namespace grassroots
