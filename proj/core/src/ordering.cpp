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

#include <grassroots/ordering.hpp>

#include <functional>
#include <queue>

namespace grassroots {

namespace {

// Kahn's algorithm restricted to the slots in `members`.
std::vector<BlockHash> linearize(const Blocklace& local, const std::vector<char>& members,
                                 const std::set<BlockHash>& exclusions) {
  const auto n = members.size();
  std::vector<std::uint32_t> indegree(n, 0);
  std::vector<std::vector<std::uint32_t>> children(n);
  for (std::uint32_t s = 0; s < n; ++s) {
    if (!members[s]) continue;
    for (auto p : local.pred_slots(s)) {
      ++indegree[s];
      children[p].push_back(s);
    }
  }

  auto later = [&](std::uint32_t a, std::uint32_t b) { return local.hash_at(b) < local.hash_at(a); };
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, decltype(later)> ready(later);
  for (std::uint32_t s = 0; s < n; ++s)
    if (members[s] && indegree[s] == 0) ready.push(s);

  std::vector<BlockHash> out;
  while (!ready.empty()) {
    auto s = ready.top();
    ready.pop();
    if (!exclusions.contains(local.hash_at(s))) out.push_back(local.hash_at(s));
    for (auto c : children[s])
      if (--indegree[c] == 0) ready.push(c);
  }
  return out;
}

}  // namespace

OrderedLog order_cone(const Blocklace& local, const BlockHash& anchor, const std::set<BlockHash>& exclusions) {
  auto slot = local.slot_of(anchor);
  if (!slot || !local.is_resolved(anchor)) throw BlocklaceError("incomplete cone");
  std::vector<char> members(local.size(), 0);
  members[*slot] = 1;
  std::vector<std::uint32_t> stack{*slot};
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    for (auto p : local.pred_slots(s))
      if (!members[p]) {
        members[p] = 1;
        stack.push_back(p);
      }
  }
  std::set<BlockHash> effective;
  for (const auto& e : exclusions)
    if (e != anchor) {
      auto es = local.slot_of(e);
      if (es && members[*es]) effective.insert(e);
    }
  return {linearize(local, members, effective), anchor};
}

OrderedLog order_all(const Blocklace& local, const std::set<BlockHash>& exclusions) {
  std::vector<char> members(local.size(), 0);
  for (std::uint32_t s = 0; s < local.size(); ++s) members[s] = local.is_resolved(local.hash_at(s)) ? 1 : 0;
  return {linearize(local, members, exclusions), std::nullopt};
}

}  // namespace grassroots
