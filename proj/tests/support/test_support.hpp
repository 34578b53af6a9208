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

// Fixtures shared by unit and acceptance tests: agents, block builders and
// seeded random DAGs.

#include <grassroots/blocklace.hpp>
#include <grassroots/crypto.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace grassroots::testing {

inline AgentId agent(const std::string& name) { return AgentId::from_name(name); }

inline std::vector<AgentId> roster(std::size_t n, const std::string& prefix = "p") {
  std::vector<AgentId> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(agent(prefix + std::to_string(i)));
  return out;
}

/// Builds signed blocks with explicit predecessors and seq numbers, without
/// consulting any blocklace.
inline Block make_block(const AgentId& creator, std::uint64_t seq, std::vector<BlockHash> preds,
                        Payload payload = Noop{}) {
  return create_block_unchecked(TestMacScheme::signer_for(creator), std::move(preds), std::move(payload), seq);
}

/// A seeded random DAG in creation order. Each block's creator chains to
/// its own previous block and picks up to `fanout` random earlier blocks.
struct RandomDag {
  std::vector<AgentId> agents;
  std::vector<Block> blocks;  // topological (creation) order
  std::vector<BlockHash> hashes;
};

inline RandomDag random_dag(std::uint64_t seed, std::size_t agents, std::size_t blocks, std::size_t fanout = 3,
                            bool allow_equivocation = false) {
  std::mt19937_64 rng(seed);
  RandomDag dag;
  dag.agents = roster(agents);
  std::map<AgentId, std::pair<std::uint64_t, BlockHash>> last;
  for (std::size_t i = 0; i < blocks; ++i) {
    const auto& who = dag.agents[rng() % agents];
    std::vector<BlockHash> preds;
    std::uint64_t seq = 0;
    if (auto it = last.find(who); it != last.end()) {
      seq = it->second.first + 1;
      bool fork = allow_equivocation && rng() % 8 == 0;
      if (!fork) preds.push_back(it->second.second);
    }
    if (!dag.hashes.empty()) {
      auto k = rng() % (fanout + 1);
      for (std::size_t j = 0; j < k; ++j) preds.push_back(dag.hashes[rng() % dag.hashes.size()]);
    }
    std::sort(preds.begin(), preds.end());
    preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
    auto b = make_block(who, seq, preds, FeedPost{"b" + std::to_string(i), std::nullopt});
    auto h = block_hash(b);
    last[who] = {seq, h};
    dag.blocks.push_back(std::move(b));
    dag.hashes.push_back(h);
  }
  return dag;
}

inline Blocklace lace_of(const std::vector<Block>& blocks) {
  Blocklace out;
  for (const auto& b : blocks) out.insert(b);
  return out;
}

/// Writes blocks for several agents into one shared blocklace. By default
/// a new block sits on every current tip; explicit predecessors get the
/// writer's own latest block added so the self-chain holds.
struct Scribe {
  Blocklace lace;

  BlockHash write(const AgentId& who, Payload payload) {
    std::vector<BlockHash> preds(lace.tips().begin(), lace.tips().end());
    return write_on(who, std::move(payload), std::move(preds));
  }

  BlockHash write_on(const AgentId& who, Payload payload, std::vector<BlockHash> preds) {
    if (auto own = lace.latest_by(who)) preds.push_back(*own);
    auto b = create_block(TestMacScheme::signer_for(who), std::move(preds), std::move(payload), lace);
    auto h = block_hash(b);
    lace.insert(b);
    return h;
  }

  /// A second block at the same seq as `who`'s latest, built on that
  /// block's own predecessors: an equivocation.
  BlockHash fork(const AgentId& who, Payload payload) {
    const auto& sibling = lace.at(*lace.latest_by(who));
    auto b = create_block_unchecked(TestMacScheme::signer_for(who), sibling.predecessors, std::move(payload),
                                    sibling.seq);
    auto h = block_hash(b);
    lace.insert(b);
    return h;
  }
};

}  // namespace grassroots::testing
