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
#include <grassroots/blocklace.hpp>
#include <grassroots/netsim.hpp>
#include <grassroots/ordering.hpp>

#include <benchmark/benchmark.h>

#include <random>

namespace grassroots {
namespace {

// Blocks in creation order; each creator chains to its own last block and
// cites a few random earlier ones.
std::vector<Block> build_dag(std::size_t agents, std::size_t blocks, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::vector<AgentId> people;
  for (std::size_t i = 0; i < agents; ++i) people.push_back(AgentId::from_name("bench" + std::to_string(i)));
  std::vector<Block> out;
  std::vector<BlockHash> hashes;
  std::map<AgentId, std::pair<std::uint64_t, BlockHash>> last;
  for (std::size_t i = 0; i < blocks; ++i) {
    const auto& who = people[rng() % agents];
    std::vector<BlockHash> preds;
    std::uint64_t seq = 0;
    if (auto it = last.find(who); it != last.end()) {
      seq = it->second.first + 1;
      preds.push_back(it->second.second);
    }
    for (int k = 0; k < 2 && !hashes.empty(); ++k) preds.push_back(hashes[rng() % hashes.size()]);
    std::sort(preds.begin(), preds.end());
    preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
    auto b = create_block_unchecked(TestMacScheme::signer_for(who), preds, FeedPost{"post", std::nullopt}, seq);
    hashes.push_back(block_hash(b));
    last[who] = {seq, hashes.back()};
    out.push_back(std::move(b));
  }
  return out;
}

Blocklace lace_of(const std::vector<Block>& blocks) {
  Blocklace lace;
  for (const auto& b : blocks) lace.insert(b);
  return lace;
}

void BM_Insert(benchmark::State& state) {
  auto blocks = build_dag(8, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lace_of(blocks).size());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Insert)->Arg(256)->Arg(1024)->Arg(4096);

void BM_Cone(benchmark::State& state) {
  auto blocks = build_dag(8, static_cast<std::size_t>(state.range(0)));
  auto lace = lace_of(blocks);
  auto top = block_hash(blocks.back());
  for (auto _ : state) benchmark::DoNotOptimize(lace.cone_set(top).size());
}
BENCHMARK(BM_Cone)->Arg(256)->Arg(1024)->Arg(4096);

void BM_OrderCone(benchmark::State& state) {
  auto blocks = build_dag(8, static_cast<std::size_t>(state.range(0)));
  auto lace = lace_of(blocks);
  auto top = block_hash(blocks.back());
  for (auto _ : state) benchmark::DoNotOptimize(order_cone(lace, top).sequence.size());
}
BENCHMARK(BM_OrderCone)->Arg(256)->Arg(1024)->Arg(4096);

void BM_Approval(benchmark::State& state) {
  auto blocks = build_dag(7, 512);
  auto lace = lace_of(blocks);
  auto creators = lace.creators();
  std::vector<AgentId> roster(creators.begin(), creators.end());
  auto target = block_hash(blocks[blocks.size() / 2]);
  FaultConfig faults{static_cast<std::uint32_t>(roster.size()), 2};
  for (auto _ : state) benchmark::DoNotOptimize(supermajority_approved(lace, target, faults, roster));
}
BENCHMARK(BM_Approval);

void BM_TwitterMesh(benchmark::State& state) {
  auto n = static_cast<std::size_t>(state.range(0));
  Scenario s;
  s.name = "bench";
  std::vector<AgentId> people;
  for (std::size_t i = 0; i < n; ++i) {
    people.push_back(AgentId::from_name("m" + std::to_string(i)));
    s.agents.push_back({people.back(), "10.9.0." + std::to_string(i + 1)});
  }
  s.faults = {static_cast<std::uint32_t>(n), 0};
  for (const auto& p : people) {
    for (const auto& q : people) {
      if (p == q) continue;
      Action follow;
      follow.tick = 1;
      follow.agent = p;
      follow.kind = ActionKind::kFollow;
      follow.target = q;
      s.actions.push_back(follow);
    }
  }
  for (const auto& p : people) {
    Action post;
    post.tick = 4;
    post.agent = p;
    post.text = "hello";
    s.actions.push_back(post);
  }
  s.net = {0.1, 0.05, 1, 3, 9, {}};
  for (auto _ : state) benchmark::DoNotOptimize(run(s, s.net, 200).stats.messages_delivered);
}
BENCHMARK(BM_TwitterMesh)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace grassroots

BENCHMARK_MAIN();
