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

// Deterministic discrete-event simulation of roaming agents over a lossy,
// duplicating, delaying datagram network. Logical ticks only; all
// randomness comes from one std::mt19937_64 seeded with NetConfig::seed.

#include <grassroots/approval.hpp>
#include <grassroots/dissemination.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace grassroots {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RoamEvent {
  std::uint64_t tick = 0;
  AgentId agent;
  std::string address;
};

struct NetConfig {
  double drop = 0.0;
  double duplicate = 0.0;
  std::uint32_t delay_min = 1;
  std::uint32_t delay_max = 1;
  std::uint64_t seed = 0;
  std::vector<RoamEvent> roaming;
};

enum class ActionKind {
  kFollow,
  kUnfollow,
  kPost,
  kGroupCreate,
  kGroupInvite,
  kGroupRemove,
  kGroupJoin,
  kGroupLeave,
  kGroupPost,
  kOpenCredit,
  kCloseCredit,
  kIssue,
  kPay,
  kRedeem,
  kByzantine,
};

/// A scripted agent action. Fields are used according to `kind`; labels
/// name the block an action creates so later actions can refer to it
/// (groups, redemption pairings).
struct Action {
  std::uint64_t tick = 0;
  AgentId agent;
  ActionKind kind = ActionKind::kPost;
  AgentId target;    // follow/unfollow/invite/remove/credit/pay target
  AgentId currency;  // pay currency, redeem against-currency
  std::uint64_t amount = 0;
  std::string text;
  std::string group_label;
  std::string paired_label;
  std::string label;
  ByzantineBehavior behavior = ByzantineBehavior::kNone;
  int line = 0;  // source line, 0 when built in code
};

struct AgentSpec {
  AgentId id;
  std::string address;
};

struct Scenario {
  std::string name;
  ProtocolKind protocol = ProtocolKind::kTwitter;
  std::vector<AgentSpec> agents;
  FaultConfig faults;
  std::vector<Action> actions;
  NetConfig net;
  DisseminationConfig dissemination;
  std::uint64_t max_ticks = 200;
};

/// Throws ScenarioError naming the first problem.
void validate(const Scenario& scenario);

/// Returns `scenario` with `agent` switched to an adversarial variant from
/// tick 0. Throws ScenarioError on an unknown agent or behavior.
Scenario inject_byzantine(Scenario scenario, const AgentId& agent, ByzantineBehavior behavior);
Scenario inject_byzantine(Scenario scenario, const AgentId& agent, std::string_view behavior);

struct TraceEvent {
  std::uint64_t tick = 0;
  std::string kind;  // send, drop, duplicate, deliver, address-change, block-created
  std::string from;
  std::string to;
  std::string summary;
  bool operator==(const TraceEvent&) const = default;
};

/// Append-only event log. Text form: `#` header lines, then one
/// `tick\tkind\tfrom\tto\tsummary` line per event.
struct Trace {
  std::vector<std::string> header;
  std::vector<TraceEvent> events;
  std::vector<std::string> footer;

  std::string to_text() const;
  /// Throws ScenarioError on a malformed line.
  static Trace parse(std::string_view text);
};

struct RunStats {
  std::uint64_t blocks_created = 0;
  std::uint64_t messages_sent = 0;
  std::uint64_t messages_dropped = 0;
  std::uint64_t messages_duplicated = 0;
  std::uint64_t messages_delivered = 0;
  std::uint64_t blocks_delivered = 0;
  std::uint64_t cordiality_violations = 0;
  std::uint64_t locality_violations = 0;
  std::uint64_t invalid_dropped = 0;
  /// Tick each block was created.
  std::map<BlockHash, std::uint64_t> created_at;
  /// (agent, block) -> tick the block resolved at that agent, for blocks by others.
  std::map<std::pair<AgentId, BlockHash>, std::uint64_t> resolved_at;
};

struct RunResult {
  Trace trace;
  std::vector<Agent> agents;  // roster order
  RunStats stats;
  std::map<std::string, BlockHash> labels;
  std::uint64_t ticks_run = 0;
  bool quiescent = false;

  const Agent& agent(const AgentId& id) const;
};

/// Called after every tick with the agents in roster order.
using TickObserver = std::function<void(std::uint64_t tick, const std::vector<Agent>& agents)>;

/// Runs until `max_ticks` or quiescence (no messages in flight, nothing
/// emitted, no scripted events left). Validates the scenario first.
RunResult run(const Scenario& scenario, const NetConfig& net, std::uint64_t max_ticks,
              const TickObserver& observer = {});

/// Per-agent blocklaces rebuilt from a trace: every block an agent created
/// plus every block delivered to it.
struct ReplayedRun {
  ProtocolKind protocol = ProtocolKind::kTwitter;
  std::vector<AgentId> roster;
  std::map<AgentId, Blocklace> locals;
  std::map<std::string, BlockHash> labels;
};

ReplayedRun replay_trace(const Trace& trace);

/// Uniform draws from the simulator's generator, portable across standard
/// libraries: 53-bit mantissa for [0,1), modulo for integer ranges.
class SimRng {
 public:
  explicit SimRng(std::uint64_t seed) : engine_(seed) {}
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + engine_() % (hi - lo + 1); }
  bool chance(double p) { return unit() < p; }
  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace grassroots
