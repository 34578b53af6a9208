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
#include <grassroots/ordering.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace grassroots {

enum class ProtocolKind { kTwitter, kWhatsApp, kCurrency };

std::string_view to_string(ProtocolKind kind);
std::optional<ProtocolKind> parse_protocol_kind(std::string_view text);

struct GroupState {
  BlockHash id;  // hash of the founding block
  AgentId founder;
  std::set<AgentId> invited;
  std::set<AgentId> members;
  std::map<AgentId, BlockHash> invitations;  // subject -> inviting block
  std::set<AgentId> removed;                 // removed and not re-invited
};

/// Directed credit offers. A line between p and q is open only when both
/// sides' latest credit op toward the other is OpenCredit.
class CreditLines {
 public:
  void open(const AgentId& from, const AgentId& to) { offers_.insert({from, to}); }
  void close(const AgentId& from, const AgentId& to) { offers_.erase({from, to}); }
  bool offers(const AgentId& from, const AgentId& to) const { return offers_.contains({from, to}); }
  bool mutual(const AgentId& p, const AgentId& q) const { return offers(p, q) && offers(q, p); }
  std::set<AgentId> partners(const AgentId& p) const;
  std::set<AgentId> offered_by(const AgentId& p) const;

 private:
  std::set<std::pair<AgentId, AgentId>> offers_;
};

struct Diagnostic {
  BlockHash block;
  std::string message;
  bool operator==(const Diagnostic&) const = default;
};

/// The social graph as replayed from graph-op payloads: follow edges,
/// groups and credit lines. Illegal ops are recorded as diagnostics and
/// otherwise ignored, so replay never halts.
class SocialGraph {
 public:
  bool follows(const AgentId& follower, const AgentId& followee) const {
    return follows_.contains({follower, followee});
  }
  const std::set<std::pair<AgentId, AgentId>>& follow_edges() const { return follows_; }
  std::set<AgentId> followees(const AgentId& p) const;

  const std::map<BlockHash, GroupState>& groups() const { return groups_; }
  const GroupState* group(const BlockHash& id) const;
  bool is_member(const BlockHash& group, const AgentId& agent) const;

  const CreditLines& credit() const { return credit_; }
  CreditLines& credit() { return credit_; }

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

  /// Applies the block's payload if it is a graph op. Causal legality
  /// checks (invitation before join) consult `local`.
  void apply(const Blocklace& local, const BlockHash& h, const Block& b);

  /// Agents p considers friends under `kind`.
  std::set<AgentId> friends_of(const AgentId& p, ProtocolKind kind) const;
  /// Friends plus targets of p's own outgoing edges (followees, pending
  /// invitees and removed members of p's groups, members of groups p has
  /// left, agents p offers credit to).
  std::set<AgentId> contacts_of(const AgentId& p, ProtocolKind kind) const;

 private:
  void diagnose(const BlockHash& h, std::string message) { diagnostics_.push_back({h, std::move(message)}); }
  void apply_group(const Blocklace& local, const BlockHash& h, const Block& b, const GroupOp& op);

  std::set<std::pair<AgentId, AgentId>> follows_;
  std::map<BlockHash, GroupState> groups_;
  CreditLines credit_;
  std::vector<Diagnostic> diagnostics_;
};

bool friendship(const SocialGraph& graph, const AgentId& p, const AgentId& q, ProtocolKind kind);

SocialGraph& apply_graph_op(SocialGraph& graph, const Blocklace& local, const BlockHash& h);

/// Pure fold of apply() over an ordered log.
SocialGraph derive_graph(const Blocklace& local, const OrderedLog& log);
SocialGraph derive_graph_at(const Blocklace& local, const BlockHash& anchor);
SocialGraph derive_graph_all(const Blocklace& local);

struct FeedEntry {
  BlockHash hash;
  std::uint64_t seq = 0;
  AgentId author;
  std::string text;
  bool operator==(const FeedEntry&) const = default;
};

struct Feed {
  std::variant<AgentId, BlockHash> target;
  std::vector<FeedEntry> posts;
};

/// Public posts by `author` in cone(as_of) plus as_of itself, in seq order.
Feed assemble_feed(const Blocklace& local, const AgentId& author, const BlockHash& as_of);

/// Posts addressed to `group` in cone(as_of) plus as_of itself whose author
/// was a member at the post's own causal snapshot, in order_cone order.
Feed assemble_group_feed(const Blocklace& local, const BlockHash& group, const BlockHash& as_of);

/// One line per post: `seq\thash-prefix\tauthor-prefix\ttext`.
std::string export_feed(const Feed& feed);

}  // namespace grassroots
