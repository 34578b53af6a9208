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

#include <grassroots/netsim.hpp>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace grassroots {
namespace {

using testing::agent;

Action act(std::uint64_t tick, const AgentId& who, ActionKind kind) {
  Action a;
  a.tick = tick;
  a.agent = who;
  a.kind = kind;
  return a;
}

Action follow(std::uint64_t tick, const AgentId& who, const AgentId& whom) {
  auto a = act(tick, who, ActionKind::kFollow);
  a.target = whom;
  return a;
}

Action post(std::uint64_t tick, const AgentId& who, std::string text) {
  auto a = act(tick, who, ActionKind::kPost);
  a.text = std::move(text);
  return a;
}

/// Everyone follows everyone at tick 1; each agent posts at ticks 3 and 6.
Scenario mesh(std::size_t n, const std::string& name = "mesh") {
  Scenario s;
  s.name = name;
  s.protocol = ProtocolKind::kTwitter;
  auto people = testing::roster(n, "a");
  for (std::size_t i = 0; i < n; ++i) s.agents.push_back({people[i], "10.0.0." + std::to_string(i + 1)});
  s.faults = {static_cast<std::uint32_t>(n), 0};
  for (const auto& p : people)
    for (const auto& q : people)
      if (p != q) s.actions.push_back(follow(1, p, q));
  for (std::uint64_t t : {3u, 6u})
    for (const auto& p : people) s.actions.push_back(post(t, p, p.display() + " at " + std::to_string(t)));
  s.max_ticks = 200;
  return s;
}

TEST(Simulation, SameSeedSameTraceDifferentSeedDifferentTrace) {
  auto s = mesh(3);
  s.net.drop = 0.2;
  s.net.duplicate = 0.1;
  s.net.delay_max = 3;
  s.net.seed = 11;
  auto first = run(s, s.net, s.max_ticks).trace.to_text();
  auto second = run(s, s.net, s.max_ticks).trace.to_text();
  EXPECT_EQ(first, second);
  auto other = s.net;
  other.seed = 12;
  EXPECT_NE(run(s, other, s.max_ticks).trace.to_text(), first);
}

TEST(Simulation, LosslessFriendsResolvePostsWithinDelayPlusTwo) {
  auto s = mesh(2);
  auto result = run(s, s.net, s.max_ticks);
  EXPECT_TRUE(result.quiescent);
  std::size_t checked = 0;
  for (const auto& viewer : result.agents) {
    for (const auto& author : result.agents) {
      if (viewer.id() == author.id()) continue;
      for (const auto& h : author.local().blocks_by(author.id())) {
        if (!std::holds_alternative<FeedPost>(author.local().at(h).payload)) continue;
        auto at = result.stats.resolved_at.find({viewer.id(), h});
        ASSERT_NE(at, result.stats.resolved_at.end());
        EXPECT_LE(at->second - result.stats.created_at.at(h), s.net.delay_max + 2u);
        ++checked;
      }
    }
  }
  EXPECT_EQ(checked, 4u);
  EXPECT_EQ(result.stats.cordiality_violations, 0u);
  EXPECT_EQ(result.stats.locality_violations, 0u);
  EXPECT_EQ(result.stats.messages_dropped, 0u);
}

TEST(Simulation, WithholdingAgentIsIsolatedButOthersProceed) {
  auto s = inject_byzantine(mesh(3), agent("a0"), "withhold");
  auto result = run(s, s.net, s.max_ticks);
  const auto& quiet = result.agent(agent("a0"));
  for (const auto& p : {agent("a1"), agent("a2")}) {
    const auto& lace = result.agent(p).local();
    for (const auto& h : quiet.local().blocks_by(quiet.id())) EXPECT_FALSE(lace.contains(h));
    auto other = p == agent("a1") ? agent("a2") : agent("a1");
    EXPECT_EQ(assemble_feed(lace, other, *lace.latest_by(p)).posts.size(), 2u);
  }
}

TEST(Simulation, FeedEquivocationIsDetectedByEveryFriend) {
  auto s = inject_byzantine(mesh(4), agent("a0"), ByzantineBehavior::kEquivocateFeed);
  auto result = run(s, s.net, s.max_ticks);
  ASSERT_EQ(result.agent(agent("a0")).equivocation_branches().size(), 2u);
  for (const auto& name : {"a1", "a2", "a3"})
    EXPECT_EQ(result.agent(agent(name)).local().detect_equivocation(agent("a0")).size(), 1u) << name;
  EXPECT_EQ(result.stats.cordiality_violations, 0u);
}

TEST(Simulation, ObserverSeesEveryTick) {
  auto s = mesh(2);
  std::uint64_t calls = 0, last = 0;
  auto result = run(s, s.net, s.max_ticks, [&](std::uint64_t t, const std::vector<Agent>& agents) {
    ++calls;
    last = t;
    EXPECT_EQ(agents.size(), 2u);
  });
  EXPECT_EQ(calls, result.ticks_run);
  EXPECT_EQ(last + 1, result.ticks_run);
}

TEST(Simulation, RoamingAgentsKeepTalking) {
  auto s = mesh(2);
  s.net.roaming.push_back({4, agent("a1"), "192.168.7.7"});
  s.actions.push_back(post(8, agent("a0"), "after the move"));
  auto result = run(s, s.net, s.max_ticks);
  EXPECT_EQ(result.agent(agent("a1")).address(), "192.168.7.7");
  const auto& lace = result.agent(agent("a1")).local();
  EXPECT_EQ(assemble_feed(lace, agent("a0"), *lace.latest_by(agent("a1"))).posts.size(), 3u);
  bool moved = false;
  for (const auto& e : result.trace.events)
    if (e.kind == "address-change") moved = e.to == "192.168.7.7";
  EXPECT_TRUE(moved);
}

TEST(Simulation, LossyNetworkStillDeliversAndAccountsForEveryMessage) {
  auto s = mesh(3);
  s.net = {0.3, 0.1, 1, 3, 5, {}};
  auto result = run(s, s.net, s.max_ticks);
  const auto& st = result.stats;
  EXPECT_GT(st.messages_dropped, 0u);
  EXPECT_GT(st.messages_duplicated, 0u);
  EXPECT_EQ(st.messages_sent + st.messages_duplicated, st.messages_dropped + st.messages_delivered);
  for (const auto& viewer : result.agents) {
    for (const auto& author : result.agents) {
      if (viewer.id() == author.id()) continue;
      auto feed = assemble_feed(viewer.local(), author.id(), *viewer.local().latest_by(viewer.id()));
      EXPECT_EQ(feed.posts.size(), 2u);
    }
  }
}

TEST(Trace, TextRoundTripsAndReplaysEveryBlocklace) {
  auto s = mesh(3);
  s.net = {0.1, 0.1, 1, 2, 3, {}};
  auto result = run(s, s.net, s.max_ticks);
  auto text = result.trace.to_text();
  auto parsed = Trace::parse(text);
  EXPECT_EQ(parsed.to_text(), text);
  EXPECT_EQ(parsed.events, result.trace.events);

  auto replayed = replay_trace(parsed);
  EXPECT_EQ(replayed.protocol, ProtocolKind::kTwitter);
  ASSERT_EQ(replayed.roster.size(), 3u);
  for (const auto& a : result.agents) EXPECT_TRUE(replayed.locals.at(a.id()) == a.local());
  EXPECT_EQ(text.rfind("# grassroots-trace 1\n", 0), 0u);
}

TEST(Trace, MalformedLinesAreRejected) {
  EXPECT_THROW(Trace::parse("# grassroots-trace 1\nnot a tick\tsend\ta\tb\tmsg=1\n"), ScenarioError);
  EXPECT_THROW(Trace::parse("# grassroots-trace 1\n3\tsend\ta\n"), ScenarioError);
  EXPECT_THROW(replay_trace(Trace::parse("# grassroots-trace 1\n0\tblock-created\ta\t-\thash=zz block=00\n")),
               ScenarioError);
}

TEST(Validation, RejectsMalformedScenarios) {
  auto base = mesh(2);
  EXPECT_NO_THROW(validate(base));

  auto dup = base;
  dup.agents[1].id = dup.agents[0].id;
  EXPECT_THROW(validate(dup), ScenarioError);

  auto same_addr = base;
  same_addr.agents[1].address = same_addr.agents[0].address;
  EXPECT_THROW(validate(same_addr), ScenarioError);

  auto stranger = base;
  stranger.actions.push_back(post(9, agent("zed"), "who am I"));
  EXPECT_THROW(validate(stranger), ScenarioError);

  auto backwards = base;
  backwards.actions.push_back(post(0, agent("a0"), "too early"));
  EXPECT_THROW(validate(backwards), ScenarioError);

  auto wrong_protocol = base;
  auto issue = act(9, agent("a0"), ActionKind::kIssue);
  issue.amount = 5;
  wrong_protocol.actions.push_back(issue);
  EXPECT_THROW(validate(wrong_protocol), ScenarioError);

  auto self_follow = base;
  self_follow.actions.push_back(follow(9, agent("a0"), agent("a0")));
  EXPECT_THROW(validate(self_follow), ScenarioError);

  auto bad_net = base;
  bad_net.net.drop = 1.5;
  EXPECT_THROW(validate(bad_net), ScenarioError);
  bad_net.net.drop = 0;
  bad_net.net.delay_min = 0;
  EXPECT_THROW(validate(bad_net), ScenarioError);

  auto bad_faults = base;
  bad_faults.faults = {5, 1};
  EXPECT_THROW(validate(bad_faults), ScenarioError);

  auto unknown_label = base;
  unknown_label.protocol = ProtocolKind::kWhatsApp;
  unknown_label.actions.clear();
  auto join = act(1, agent("a1"), ActionKind::kGroupJoin);
  join.group_label = "nowhere";
  unknown_label.actions.push_back(join);
  EXPECT_THROW(validate(unknown_label), ScenarioError);
}

TEST(Validation, InjectionNeedsAKnownAgentAndBehavior) {
  auto base = mesh(2);
  EXPECT_THROW(inject_byzantine(base, agent("zed"), ByzantineBehavior::kWithhold), ScenarioError);
  EXPECT_THROW(inject_byzantine(base, agent("a0"), "gossip"), ScenarioError);
  auto injected = inject_byzantine(base, agent("a0"), "equivocate-feed");
  ASSERT_FALSE(injected.actions.empty());
  EXPECT_EQ(injected.actions.front().kind, ActionKind::kByzantine);
  EXPECT_EQ(injected.actions.front().tick, 0u);
}

TEST(SimRngTest, MapsDrawsPortably) {
  SimRng a(42), b(42);
  std::mt19937_64 reference(42);
  for (int i = 0; i < 100; ++i) {
    auto x = reference();
    EXPECT_EQ(a.unit(), static_cast<double>(x >> 11) * 0x1.0p-53);
    auto y = reference();
    EXPECT_EQ(a.between(3, 9), 3 + y % 7);
  }
  for (int i = 0; i < 1000; ++i) {
    auto u = b.unit();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace grassroots
