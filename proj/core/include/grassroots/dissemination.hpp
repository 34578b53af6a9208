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
#include <grassroots/crypto.hpp>
#include <grassroots/social.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace grassroots {

/// What the sender knows about one peer.
struct PeerView {
  AgentId peer;
  /// Most recent resolved peer block held locally (from any source).
  std::optional<BlockHash> latest_peer_block;
  /// Blocks sent to the peer and not yet acked, with the tick last sent.
  std::map<BlockHash, std::uint64_t> sent_since_ack;
  std::string address;

  // Own-latest resend triggers.
  std::optional<BlockHash> own_latest_sent;
  bool stale = false;     // peer re-sent blocks we had already acked
  bool announce = false;  // we roamed and have not heard from the peer since
  std::uint32_t announce_left = 0;
  bool reply = false;  // the peer roamed; answer so it learns we heard
};

/// Does `receiver` need block `b`, judged on the sender's view of the graph?
/// Noop blocks and the receiver's own blocks are never needed.
bool needs(const Blocklace& local, const SocialGraph& graph, ProtocolKind policy, const AgentId& receiver,
           const Block& b);

/// Blocks the peer needs that are outside cone(latest-peer-block) and the
/// latest peer block itself, together with their cones (so they resolve at
/// the peer) minus what the peer has acked and the peer's own blocks.
/// Parents come before children.
std::vector<Block> cordial_diff(const Blocklace& local, const PeerView& view, ProtocolKind policy,
                                const SocialGraph& graph);

struct DisseminationConfig {
  std::size_t batch_cap = 64;
  /// Disclose at most once every this many ticks.
  std::uint32_t disclosure_period = 1;
  /// Minimum ticks before the same block is re-sent to the same peer.
  std::uint32_t resend_interval = 3;
  /// Ticks an agent keeps announcing a new address to a silent peer.
  std::uint32_t announce_ticks = 16;
};

enum class ByzantineBehavior { kNone, kEquivocatePayment, kEquivocateFeed, kWithhold };

std::string_view to_string(ByzantineBehavior b);
std::optional<ByzantineBehavior> parse_byzantine_behavior(std::string_view text);

struct Outgoing {
  AgentId to;
  std::string address;
  std::vector<Block> blocks;
};

struct ReceiveResult {
  std::vector<BlockHash> resolved;
  std::size_t invalid = 0;
  std::size_t duplicates = 0;
};

/// One agent's grassroots dissemination state machine: its blocklace, its
/// peer views and the Disclosure/Cordiality rules.
class Agent {
 public:
  Agent(AgentId id, ProtocolKind protocol, std::string address, std::map<AgentId, std::string> directory,
        DisseminationConfig config = {});

  const AgentId& id() const { return id_; }
  ProtocolKind protocol() const { return protocol_; }
  const std::string& address() const { return address_; }
  const Blocklace& local() const { return local_; }
  const SocialGraph& graph() const;
  const std::map<AgentId, PeerView>& peers() const { return peers_; }
  std::size_t invalid_dropped() const { return invalid_dropped_; }
  ByzantineBehavior behavior() const { return behavior_; }
  /// The two branches once an equivocating behavior has fired.
  const std::vector<BlockHash>& equivocation_branches() const { return branches_; }

  /// Creates the agent's next block on top of all current tips. Returns the
  /// new block's hash. An armed equivocating behavior may also create a
  /// conflicting sibling (see set_behavior()).
  BlockHash act(Payload payload);
  /// A Noop block on top of all current tips.
  BlockHash disclose() { return act(Noop{}); }

  ReceiveResult on_receive(const AgentId& from, const std::string& from_address, const std::vector<Block>& blocks);

  /// One step: rulings and redemption settlements (currency issuers),
  /// disclosure if there is content to ack, then a cordial batch per
  /// contact.
  std::vector<Outgoing> tick();

  void change_address(std::string new_address);

  /// Swaps the state machine for an adversarial variant. Equivocating
  /// behaviors fire on the agent's next pay (resp. post) action.
  void set_behavior(ByzantineBehavior behavior) { behavior_ = behavior; }

  /// Has `peer` acked `h` (h is the peer's latest block or in its cone)?
  bool acked_by(const AgentId& peer, const BlockHash& h) const;

  std::uint64_t ticks() const { return tick_count_; }

 private:
  PeerView& view_of(const AgentId& peer);
  void refresh_views();
  void absorb(const std::vector<BlockHash>& resolved);
  void equivocate(const Block& first);
  std::vector<Outgoing> byzantine_tick();
  void issuer_duties();
  std::vector<Block> pace(PeerView& view, std::vector<Block> diff);

  AgentId id_;
  ProtocolKind protocol_;
  std::string address_;
  std::map<AgentId, std::string> directory_;
  DisseminationConfig config_;
  TestMacScheme::MacSigner signer_;

  Blocklace local_;
  std::map<AgentId, PeerView> peers_;
  mutable SocialGraph graph_;
  mutable bool graph_dirty_ = false;
  bool unacked_content_ = false;
  bool rulings_dirty_ = false;
  bool obligations_dirty_ = false;
  std::uint64_t tick_count_ = 0;
  std::size_t invalid_dropped_ = 0;

  ByzantineBehavior behavior_ = ByzantineBehavior::kNone;
  std::vector<BlockHash> branches_;
  std::map<AgentId, BlockHash> branch_for_;
};

}  // namespace grassroots
