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
#include <grassroots/ordering.hpp>

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "test_support.hpp"

namespace grassroots {
namespace {

using testing::agent;
using testing::make_block;

struct ThresholdCase {
  std::uint32_t n, f, expected;
};

class Threshold : public ::testing::TestWithParam<ThresholdCase> {};

TEST_P(Threshold, LeastIntegerAboveHalfOfNPlusF) {
  auto c = GetParam();
  EXPECT_EQ(supermajority_threshold({c.n, c.f, false}), c.expected);
  // Cross-check: smallest k with 2k > n + f.
  std::uint32_t k = 0;
  while (2 * k <= c.n + c.f) ++k;
  EXPECT_EQ(k, c.expected);
}

INSTANTIATE_TEST_SUITE_P(Table, Threshold,
                         ::testing::Values(ThresholdCase{3, 0, 2}, ThresholdCase{4, 1, 3}, ThresholdCase{10, 3, 7},
                                           ThresholdCase{1, 0, 1}, ThresholdCase{7, 2, 5}, ThresholdCase{5, 0, 3}));

TEST(FaultConfigTest, ValidatesRanges) {
  EXPECT_NO_THROW((FaultConfig{4, 1}.validate()));
  EXPECT_THROW((FaultConfig{0, 0}.validate()), std::invalid_argument);
  EXPECT_THROW((FaultConfig{3, 3, false}.validate()), std::invalid_argument);
  EXPECT_THROW((FaultConfig{3, 1}.validate()), std::invalid_argument);
  EXPECT_NO_THROW((FaultConfig{3, 1, false}.validate()));
}

class ApprovalTest : public ::testing::Test {
 protected:
  std::vector<AgentId> roster = testing::roster(4);
  Blocklace lace;
  std::map<AgentId, BlockHash> genesis;

  void SetUp() override {
    for (const auto& p : roster) {
      auto b = make_block(p, 0, {});
      genesis[p] = block_hash(b);
      lace.insert(b);
    }
  }
};

TEST_F(ApprovalTest, ObserversApproveWhatTheySee) {
  const auto& payer = roster[0];
  auto pay = make_block(payer, 1, {genesis[payer]}, FeedPost{"pay", std::nullopt});
  auto h = block_hash(pay);
  lace.insert(pay);
  EXPECT_FALSE(approves(lace, roster[1], h));
  for (std::size_t i = 1; i < 4; ++i) lace.insert(make_block(roster[i], 1, {genesis[roster[i]], h}));
  auto record = approval_record(lace, h, roster);
  EXPECT_EQ(record.approvers, (std::set<AgentId>{roster[1], roster[2], roster[3]}));
  EXPECT_TRUE(supermajority_approved(lace, h, {4, 1}, roster));
}

TEST_F(ApprovalTest, SeeingBothBranchesWithholdsApproval) {
  const auto& payer = roster[0];
  auto x = make_block(payer, 1, {genesis[payer]}, FeedPost{"x", std::nullopt});
  auto y = make_block(payer, 1, {genesis[payer]}, FeedPost{"y", std::nullopt});
  auto hx = block_hash(x), hy = block_hash(y);
  lace.insert(x);
  lace.insert(y);
  lace.insert(make_block(roster[1], 1, {genesis[roster[1]], hx}));
  lace.insert(make_block(roster[2], 1, {genesis[roster[2]], hx, hy}));
  EXPECT_TRUE(approves(lace, roster[1], hx));
  EXPECT_FALSE(approves(lace, roster[2], hx));
  EXPECT_FALSE(approves(lace, roster[2], hy));
  EXPECT_FALSE(supermajority_approved(lace, hx, {4, 1}, roster));
}

TEST(ApprovalProperty, MatchesOracleOnRandomDags) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto dag = testing::random_dag(seed, 4, 30, 2, true);
    auto lace = testing::lace_of(dag.blocks);
    auto blocks = oracle::index(dag.blocks);
    for (const auto& h : dag.hashes)
      for (const auto& p : dag.agents) ASSERT_EQ(approves(lace, p, h), oracle::approves(blocks, p, h)) << seed;
  }
}

class OrderingAgreement : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(OrderingAgreement, MatchesRepeatedMinimumOracle) {
  auto dag = testing::random_dag(GetParam(), 4, 30);
  auto lace = testing::lace_of(dag.blocks);
  auto blocks = oracle::index(dag.blocks);
  for (const auto& anchor : lace.tips()) {
    auto log = order_cone(lace, anchor);
    EXPECT_EQ(log.anchor, anchor);
    EXPECT_EQ(log.sequence, oracle::repeated_minimum_order(blocks, anchor));
    EXPECT_EQ(log.sequence.back(), anchor);
  }
}

TEST_P(OrderingAgreement, ExclusionsConstrainButAreNotEmitted) {
  auto dag = testing::random_dag(GetParam(), 4, 30);
  auto lace = testing::lace_of(dag.blocks);
  auto blocks = oracle::index(dag.blocks);
  std::mt19937_64 rng(GetParam());
  auto anchor = dag.hashes.back();
  auto scope = oracle::cone(blocks, anchor);
  std::vector<BlockHash> in_scope(scope.begin(), scope.end());
  std::set<BlockHash> excluded;
  for (int i = 0; i < 4 && !in_scope.empty(); ++i) excluded.insert(in_scope[rng() % in_scope.size()]);
  auto log = order_cone(lace, anchor, excluded).sequence;
  EXPECT_EQ(log, oracle::repeated_minimum_order(blocks, anchor, excluded));
  EXPECT_EQ(log.size(), scope.size() + 1 - excluded.size());

  // Exclusions outside cone(anchor), the anchor included, are ignored.
  std::set<BlockHash> outside{anchor};
  for (const auto& h : dag.hashes)
    if (!scope.contains(h)) outside.insert(h);
  EXPECT_EQ(order_cone(lace, anchor, outside).sequence, order_cone(lace, anchor).sequence);
}

TEST_P(OrderingAgreement, IndependentOfInsertionOrder) {
  auto dag = testing::random_dag(GetParam(), 3, 25);
  auto shuffled = dag.blocks;
  std::mt19937_64 rng(GetParam() ^ 0x5eed);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  auto a = testing::lace_of(dag.blocks), b = testing::lace_of(shuffled);
  EXPECT_EQ(order_all(a).sequence, order_all(b).sequence);
  EXPECT_FALSE(order_all(a).anchor.has_value());
  EXPECT_EQ(order_all(a).sequence.size(), dag.blocks.size());
}

INSTANTIATE_TEST_SUITE_P(Seeds, OrderingAgreement, ::testing::Range<std::uint64_t>(1, 31));

TEST(Ordering, PrefixConsistentAlongTheAnchorsChain) {
  auto dag = testing::random_dag(99, 3, 40);
  auto lace = testing::lace_of(dag.blocks);
  // A later block of the same creator orders a superset; the cone of the
  // earlier anchor keeps its relative order.
  const auto& p = dag.agents[0];
  auto mine = lace.blocks_by(p);
  std::vector<BlockHash> chain(mine.begin(), mine.end());
  std::sort(chain.begin(), chain.end(), [&](auto& x, auto& y) { return lace.at(x).seq < lace.at(y).seq; });
  ASSERT_GE(chain.size(), 2u);
  auto early = order_cone(lace, chain.front()).sequence;
  auto late = order_cone(lace, chain.back()).sequence;
  std::vector<BlockHash> filtered;
  std::set<BlockHash> early_set(early.begin(), early.end());
  for (const auto& h : late)
    if (early_set.contains(h)) filtered.push_back(h);
  EXPECT_EQ(filtered.size(), early.size());
}

TEST(Ordering, UnresolvedAnchorThrows) {
  auto a = make_block(agent("a"), 0, {});
  auto b = make_block(agent("b"), 1, {block_hash(a)});
  Blocklace lace;
  lace.insert(b);
  EXPECT_THROW(order_cone(lace, block_hash(b)), BlocklaceError);
}

}  // namespace
}  // namespace grassroots
