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

#include <grassroots/social.hpp>

#include <algorithm>
#include <sstream>

namespace grassroots {

std::string_view to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::kTwitter:
      return "twitter";
    case ProtocolKind::kWhatsApp:
      return "whatsapp";
    case ProtocolKind::kCurrency:
      return "currency";
  }
  return "unknown";
}

std::optional<ProtocolKind> parse_protocol_kind(std::string_view text) {
  if (text == "twitter") return ProtocolKind::kTwitter;
  if (text == "whatsapp") return ProtocolKind::kWhatsApp;
  if (text == "currency") return ProtocolKind::kCurrency;
  return std::nullopt;
}

std::set<AgentId> CreditLines::partners(const AgentId& p) const {
  std::set<AgentId> out;
  for (const auto& [from, to] : offers_)
    if (from == p && offers(to, p)) out.insert(to);
  return out;
}

std::set<AgentId> CreditLines::offered_by(const AgentId& p) const {
  std::set<AgentId> out;
  for (const auto& [from, to] : offers_)
    if (from == p) out.insert(to);
  return out;
}

std::set<AgentId> SocialGraph::followees(const AgentId& p) const {
  std::set<AgentId> out;
  for (const auto& [from, to] : follows_)
    if (from == p) out.insert(to);
  return out;
}

const GroupState* SocialGraph::group(const BlockHash& id) const {
  auto it = groups_.find(id);
  return it == groups_.end() ? nullptr : &it->second;
}

bool SocialGraph::is_member(const BlockHash& group, const AgentId& agent) const {
  auto* g = this->group(group);
  return g && g->members.contains(agent);
}

void SocialGraph::apply_group(const Blocklace& local, const BlockHash& h, const Block& b, const GroupOp& op) {
  if (op.kind == GroupOpKind::kCreate) {
    GroupState g;
    g.id = h;
    g.founder = b.creator;
    g.members.insert(b.creator);
    groups_.emplace(h, std::move(g));
    return;
  }
  auto it = groups_.find(op.group);
  if (it == groups_.end() || !local.in_cone(h, op.group)) return diagnose(h, "unknown group");
  auto& g = it->second;
  const auto& actor = b.creator;
  switch (op.kind) {
    case GroupOpKind::kInvite:
      if (actor != g.founder) return diagnose(h, "invite by non-founder");
      if (g.members.contains(op.subject)) return diagnose(h, "already a member");
      g.invited.insert(op.subject);
      g.invitations[op.subject] = h;
      g.removed.erase(op.subject);
      return;
    case GroupOpKind::kRemove:
      if (actor != g.founder) return diagnose(h, "remove by non-founder");
      if (op.subject == g.founder) return diagnose(h, "founder cannot be removed");
      if (!g.members.contains(op.subject) && !g.invited.contains(op.subject))
        return diagnose(h, "remove of non-member");
      g.members.erase(op.subject);
      g.invited.erase(op.subject);
      g.invitations.erase(op.subject);
      g.removed.insert(op.subject);
      return;
    case GroupOpKind::kJoin: {
      if (actor != op.subject) return diagnose(h, "join on behalf of another agent");
      auto inv = g.invitations.find(actor);
      if (inv == g.invitations.end() || !local.in_cone(h, inv->second)) return diagnose(h, "join without invite");
      g.members.insert(actor);
      return;
    }
    case GroupOpKind::kLeave:
      if (actor != op.subject) return diagnose(h, "leave on behalf of another agent");
      if (actor == g.founder) return diagnose(h, "founder cannot leave");
      if (!g.members.erase(actor)) return diagnose(h, "leave by non-member");
      return;
    case GroupOpKind::kCreate:
      return;
  }
}

void SocialGraph::apply(const Blocklace& local, const BlockHash& h, const Block& b) {
  if (auto* f = std::get_if<Follow>(&b.payload)) {
    if (f->target == b.creator) return diagnose(h, "self follow");
    follows_.insert({b.creator, f->target});
  } else if (auto* u = std::get_if<Unfollow>(&b.payload)) {
    if (!follows_.erase({b.creator, u->target})) diagnose(h, "unfollow without follow");
  } else if (auto* g = std::get_if<GroupOp>(&b.payload)) {
    apply_group(local, h, b, *g);
  } else if (auto* c = std::get_if<CoinOp>(&b.payload)) {
    if (auto* o = std::get_if<coin::OpenCredit>(c)) {
      if (o->peer == b.creator) return diagnose(h, "self credit line");
      credit_.open(b.creator, o->peer);
    } else if (auto* x = std::get_if<coin::CloseCredit>(c)) {
      credit_.close(b.creator, x->peer);
    }
  }
}

std::set<AgentId> SocialGraph::friends_of(const AgentId& p, ProtocolKind kind) const {
  std::set<AgentId> out;
  switch (kind) {
    case ProtocolKind::kTwitter:
      for (const auto& q : followees(p))
        if (follows(q, p)) out.insert(q);
      break;
    case ProtocolKind::kWhatsApp:
      for (const auto& [_, g] : groups_)
        if (g.members.contains(p)) out.insert(g.members.begin(), g.members.end());
      out.erase(p);
      break;
    case ProtocolKind::kCurrency:
      out = credit_.partners(p);
      break;
  }
  return out;
}

std::set<AgentId> SocialGraph::contacts_of(const AgentId& p, ProtocolKind kind) const {
  auto out = friends_of(p, kind);
  switch (kind) {
    case ProtocolKind::kTwitter: {
      auto f = followees(p);
      out.insert(f.begin(), f.end());
      break;
    }
    case ProtocolKind::kWhatsApp:
      for (const auto& [_, g] : groups_) {
        if (g.founder == p) {
          for (const auto& q : g.invited)
            if (!g.members.contains(q)) out.insert(q);
          out.insert(g.removed.begin(), g.removed.end());
        }
        // Former members still owe the group their leave.
        if (g.invited.contains(p) && !g.members.contains(p)) out.insert(g.members.begin(), g.members.end());
      }
      break;
    case ProtocolKind::kCurrency: {
      auto o = credit_.offered_by(p);
      out.insert(o.begin(), o.end());
      break;
    }
  }
  out.erase(p);
  return out;
}

bool friendship(const SocialGraph& graph, const AgentId& p, const AgentId& q, ProtocolKind kind) {
  if (p == q) return false;
  switch (kind) {
    case ProtocolKind::kTwitter:
      return graph.follows(p, q) && graph.follows(q, p);
    case ProtocolKind::kWhatsApp:
      for (const auto& [_, g] : graph.groups())
        if (g.members.contains(p) && g.members.contains(q)) return true;
      return false;
    case ProtocolKind::kCurrency:
      return graph.credit().mutual(p, q);
  }
  return false;
}

SocialGraph& apply_graph_op(SocialGraph& graph, const Blocklace& local, const BlockHash& h) {
  graph.apply(local, h, local.at(h));
  return graph;
}

SocialGraph derive_graph(const Blocklace& local, const OrderedLog& log) {
  SocialGraph g;
  for (const auto& h : log.sequence) g.apply(local, h, local.at(h));
  return g;
}

SocialGraph derive_graph_at(const Blocklace& local, const BlockHash& anchor) {
  return derive_graph(local, order_cone(local, anchor));
}

SocialGraph derive_graph_all(const Blocklace& local) { return derive_graph(local, order_all(local)); }

Feed assemble_feed(const Blocklace& local, const AgentId& author, const BlockHash& as_of) {
  Feed feed{author, {}};
  auto cone = local.cone_set(as_of, true);
  for (const auto& h : local.blocks_by(author)) {
    if (!cone.contains(h)) continue;
    const auto& b = local.at(h);
    auto* post = std::get_if<FeedPost>(&b.payload);
    if (!post || post->group) continue;
    feed.posts.push_back({h, b.seq, author, post->text});
  }
  std::sort(feed.posts.begin(), feed.posts.end(), [](const FeedEntry& a, const FeedEntry& b) {
    return a.seq != b.seq ? a.seq < b.seq : a.hash < b.hash;
  });
  return feed;
}

Feed assemble_group_feed(const Blocklace& local, const BlockHash& group, const BlockHash& as_of) {
  Feed feed{group, {}};
  for (const auto& h : order_cone(local, as_of).sequence) {
    const auto& b = local.at(h);
    auto* post = std::get_if<FeedPost>(&b.payload);
    if (!post || post->group != group) continue;
    // Membership at the post's own causal snapshot.
    auto snapshot = derive_graph_at(local, h);
    if (!snapshot.is_member(group, b.creator)) continue;
    feed.posts.push_back({h, b.seq, b.creator, post->text});
  }
  return feed;
}

std::string export_feed(const Feed& feed) {
  std::ostringstream os;
  for (const auto& p : feed.posts)
    os << p.seq << '\t' << p.hash.prefix() << '\t' << p.author.display() << '\t' << p.text << '\n';
  return os.str();
}

}  // namespace grassroots
