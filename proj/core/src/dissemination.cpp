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

#include <grassroots/currency.hpp>
#include <grassroots/dissemination.hpp>

#include <algorithm>

namespace grassroots {

namespace {

bool is_graph_op(const Payload& p) {
  if (std::holds_alternative<Follow>(p) || std::holds_alternative<Unfollow>(p) || std::holds_alternative<GroupOp>(p))
    return true;
  if (auto* c = std::get_if<CoinOp>(&p))
    return std::holds_alternative<coin::OpenCredit>(*c) || std::holds_alternative<coin::CloseCredit>(*c);
  return false;
}

std::vector<char> acked_mask(const Blocklace& local, const PeerView& view) {
  if (view.latest_peer_block && local.is_resolved(*view.latest_peer_block)) {
    auto cone = local.cone_set(*view.latest_peer_block, true);
    std::vector<char> mask(local.size(), 0);
    for (std::uint32_t s = 0; s < mask.size(); ++s) mask[s] = cone.contains_slot(s) ? 1 : 0;
    return mask;
  }
  return std::vector<char>(local.size(), 0);
}

// Roots plus their cones, minus the peer's acked cone and the peer's own
// blocks (both downward closed in what the peer knows). Parents first.
std::vector<Block> closure_diff(const Blocklace& local, const std::vector<char>& acked, const AgentId& peer,
                                const std::vector<std::uint32_t>& roots) {
  std::vector<char> chosen(local.size(), 0);
  std::vector<std::uint32_t> stack;
  auto visit = [&](std::uint32_t s) {
    if (chosen[s] || acked[s] || local.block_at(s).creator == peer) return;
    chosen[s] = 1;
    stack.push_back(s);
  };
  for (auto r : roots) visit(r);
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    for (auto p : local.pred_slots(s)) visit(p);
  }
  std::vector<Block> out;
  for (const auto& h : local.resolved_order()) {
    auto s = *local.slot_of(h);
    if (chosen[s]) out.push_back(local.block_at(s));
  }
  return out;
}

std::vector<std::uint32_t> needed_roots(const Blocklace& local, const std::vector<char>& acked, const SocialGraph& graph,
                                        ProtocolKind policy, const AgentId& receiver) {
  std::vector<std::uint32_t> roots;
  for (std::uint32_t s = 0; s < local.size(); ++s) {
    if (acked[s] || !local.is_resolved(local.hash_at(s))) continue;
    if (needs(local, graph, policy, receiver, local.block_at(s))) roots.push_back(s);
  }
  return roots;
}

bool currency_needs(const Blocklace& local, const AgentId& q, const CoinOp& op) {
  if (auto* o = std::get_if<coin::OpenCredit>(&op)) return o->peer == q;
  if (auto* c = std::get_if<coin::CloseCredit>(&op)) return c->peer == q;
  if (auto* p = std::get_if<coin::Pay>(&op)) return p->to == q || p->currency == q;
  if (auto* r = std::get_if<coin::RedeemRequest>(&op)) {
    const auto* paired = local.find(r->paired_payment);
    const auto* pay = paired ? as_pay(paired->payload) : nullptr;
    return pay && pay->to == q;
  }
  if (auto* ruling = std::get_if<coin::IssuerRuling>(&op)) {
    std::vector<BlockHash> named(ruling->losers.begin(), ruling->losers.end());
    named.push_back(ruling->winner);
    for (const auto& h : named) {
      const auto* b = local.find(h);
      const auto* pay = b ? as_pay(b->payload) : nullptr;
      if (pay && (pay->to == q || b->creator == q)) return true;
    }
  }
  return false;
}

}  // namespace

bool needs(const Blocklace& local, const SocialGraph& graph, ProtocolKind policy, const AgentId& receiver,
           const Block& b) {
  if (b.creator == receiver || std::holds_alternative<Noop>(b.payload)) return false;
  switch (policy) {
    case ProtocolKind::kTwitter:
      if (auto* f = std::get_if<Follow>(&b.payload); f && f->target == receiver) return true;
      if (auto* u = std::get_if<Unfollow>(&b.payload); u && u->target == receiver) return true;
      if (auto* post = std::get_if<FeedPost>(&b.payload); post && post->group) return false;
      return graph.follows(receiver, b.creator);
    case ProtocolKind::kWhatsApp:
      if (auto* post = std::get_if<FeedPost>(&b.payload)) return post->group && graph.is_member(*post->group, receiver);
      if (auto* g = std::get_if<GroupOp>(&b.payload)) {
        if (g->kind == GroupOpKind::kCreate) return graph.is_member(block_hash(b), receiver);
        return g->subject == receiver || graph.is_member(g->group, receiver);
      }
      return false;
    case ProtocolKind::kCurrency:
      if (auto* c = std::get_if<CoinOp>(&b.payload)) return currency_needs(local, receiver, *c);
      return false;
  }
  return false;
}

std::vector<Block> cordial_diff(const Blocklace& local, const PeerView& view, ProtocolKind policy,
                                const SocialGraph& graph) {
  auto acked = acked_mask(local, view);
  return closure_diff(local, acked, view.peer, needed_roots(local, acked, graph, policy, view.peer));
}

std::string_view to_string(ByzantineBehavior b) {
  switch (b) {
    case ByzantineBehavior::kNone:
      return "none";
    case ByzantineBehavior::kEquivocatePayment:
      return "equivocate-payment";
    case ByzantineBehavior::kEquivocateFeed:
      return "equivocate-feed";
    case ByzantineBehavior::kWithhold:
      return "withhold";
  }
  return "unknown";
}

std::optional<ByzantineBehavior> parse_byzantine_behavior(std::string_view text) {
  if (text == "equivocate-payment") return ByzantineBehavior::kEquivocatePayment;
  if (text == "equivocate-feed") return ByzantineBehavior::kEquivocateFeed;
  if (text == "withhold") return ByzantineBehavior::kWithhold;
  return std::nullopt;
}

Agent::Agent(AgentId id, ProtocolKind protocol, std::string address, std::map<AgentId, std::string> directory,
             DisseminationConfig config)
    : id_(id),
      protocol_(protocol),
      address_(std::move(address)),
      directory_(std::move(directory)),
      config_(config),
      signer_(TestMacScheme::signer_for(id)) {}

const SocialGraph& Agent::graph() const {
  if (graph_dirty_) {
    graph_ = derive_graph_all(local_);
    graph_dirty_ = false;
  }
  return graph_;
}

PeerView& Agent::view_of(const AgentId& peer) {
  auto [it, fresh] = peers_.try_emplace(peer);
  if (fresh) {
    it->second.peer = peer;
    if (auto d = directory_.find(peer); d != directory_.end()) it->second.address = d->second;
    it->second.latest_peer_block = local_.latest_by(peer);
  }
  return it->second;
}

void Agent::refresh_views() {
  for (auto& [peer, view] : peers_) {
    view.latest_peer_block = local_.latest_by(peer);
    if (!view.latest_peer_block || view.sent_since_ack.empty()) continue;
    auto cone = local_.cone_set(*view.latest_peer_block, true);
    std::erase_if(view.sent_since_ack, [&](const auto& entry) { return cone.contains(entry.first); });
  }
}

bool Agent::acked_by(const AgentId& peer, const BlockHash& h) const {
  auto latest = local_.latest_by(peer);
  if (!latest) return false;
  return *latest == h || local_.in_cone(*latest, h);
}

void Agent::absorb(const std::vector<BlockHash>& resolved) {
  for (const auto& h : resolved) {
    const auto& b = local_.at(h);
    if (b.creator != id_ && !std::holds_alternative<Noop>(b.payload)) unacked_content_ = true;
    if (is_graph_op(b.payload)) graph_dirty_ = true;
    if (as_pay(b.payload)) rulings_dirty_ = obligations_dirty_ = true;
    if (auto* c = std::get_if<CoinOp>(&b.payload); c && std::holds_alternative<coin::RedeemRequest>(*c))
      obligations_dirty_ = true;
  }
}

BlockHash Agent::act(Payload payload) {
  std::vector<BlockHash> preds(local_.tips().begin(), local_.tips().end());
  if (auto own = local_.latest_by(id_)) preds.push_back(*own);
  auto block = create_block(signer_, std::move(preds), std::move(payload), local_);
  auto h = block_hash(block);
  absorb(local_.insert(block));
  unacked_content_ = false;

  bool fire = branches_.empty() &&
              ((behavior_ == ByzantineBehavior::kEquivocatePayment && as_pay(block.payload)) ||
               (behavior_ == ByzantineBehavior::kEquivocateFeed && std::holds_alternative<FeedPost>(block.payload)));
  if (fire) equivocate(block);
  return h;
}

void Agent::equivocate(const Block& first) {
  auto contacts = graph().contacts_of(id_, protocol_);
  Payload sibling_payload = first.payload;
  AgentId first_target;
  bool targeted = false;
  if (const auto* pay = as_pay(first.payload)) {
    first_target = pay->to;
    targeted = true;
    std::optional<AgentId> second;
    for (const auto& c : contacts)
      if (c != pay->to && c != pay->currency && graph().credit().mutual(id_, c)) {
        second = c;
        break;
      }
    if (!second)
      for (const auto& c : contacts)
        if (c != pay->to) {
          second = c;
          break;
        }
    if (!second) return;
    auto alt = *pay;
    alt.to = *second;
    sibling_payload = CoinOp{alt};
  } else {
    auto post = std::get<FeedPost>(first.payload);
    post.text += " [alt]";
    sibling_payload = post;
  }
  auto sibling = create_block_unchecked(signer_, first.predecessors, sibling_payload, first.seq);
  absorb(local_.insert(sibling));
  auto a = block_hash(first);
  auto b = block_hash(sibling);
  branches_ = {a, b};

  std::vector<AgentId> ordered(contacts.begin(), contacts.end());
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    bool gets_first = targeted ? ordered[i] == first_target : i < (ordered.size() + 1) / 2;
    branch_for_[ordered[i]] = gets_first ? a : b;
  }
}

ReceiveResult Agent::on_receive(const AgentId& from, const std::string& from_address,
                                const std::vector<Block>& blocks) {
  ReceiveResult result;
  auto& view = view_of(from);
  if (view.address != from_address) view.reply = true;
  view.address = from_address;
  view.announce = false;

  std::optional<ConeSet> own_cone;
  if (auto own = local_.latest_by(id_)) own_cone = local_.cone_set(*own, true);

  for (const auto& b : blocks) {
    auto h = block_hash(b);
    if (local_.contains(h)) {
      ++result.duplicates;
      if (own_cone && own_cone->contains(h)) view.stale = true;
      continue;
    }
    try {
      auto resolved = local_.insert(b);
      absorb(resolved);
      result.resolved.insert(result.resolved.end(), resolved.begin(), resolved.end());
    } catch (const BlocklaceError&) {
      ++result.invalid;
      ++invalid_dropped_;
    }
  }
  refresh_views();
  return result;
}

void Agent::change_address(std::string new_address) {
  address_ = std::move(new_address);
  for (const auto& [peer, _] : directory_)
    if (peer != id_) view_of(peer);
  for (auto& [_, view] : peers_) {
    view.announce = true;
    view.announce_left = config_.announce_ticks;
  }
}

std::vector<Block> Agent::pace(PeerView& view, std::vector<Block> diff) {
  std::vector<Block> out;
  auto own = local_.latest_by(id_);
  bool force_own = own && (view.own_latest_sent != own || view.stale || view.announce);
  for (auto& b : diff) {
    if (out.size() >= config_.batch_cap) break;
    auto h = block_hash(b);
    auto it = view.sent_since_ack.find(h);
    bool recent = it != view.sent_since_ack.end() && tick_count_ < it->second + config_.resend_interval;
    if (recent && !(force_own && own == h)) continue;
    view.sent_since_ack[h] = tick_count_;
    if (own == h) view.own_latest_sent = h;
    out.push_back(std::move(b));
  }
  view.stale = false;
  return out;
}

std::vector<Outgoing> Agent::byzantine_tick() {
  std::vector<Outgoing> out;
  refresh_views();
  for (const auto& [peer, branch] : branch_for_) {
    auto& view = view_of(peer);
    auto acked = acked_mask(local_, view);
    auto diff = closure_diff(local_, acked, peer, {*local_.slot_of(branch)});
    auto batch = pace(view, std::move(diff));
    if (!batch.empty()) out.push_back({peer, view.address, std::move(batch)});
  }
  return out;
}

void Agent::issuer_duties() {
  if (rulings_dirty_) {
    rulings_dirty_ = false;
    for (;;) {
      auto pending = unruled_doublespends(local_, id_);
      if (pending.empty()) break;
      act(CoinOp{resolve_doublespend(local_, id_, pending.front())});
    }
  }
  if (obligations_dirty_) {
    obligations_dirty_ = false;
    // Honour redemptions of our coins while we can cover them.
    for (;;) {
      auto ledger = replay_all(local_).ledger;
      auto due = std::find_if(ledger.obligations().begin(), ledger.obligations().end(), [&](const Obligation& o) {
        return o.issuer == id_ && !o.settled() && !ledger.unsettleable(o) && ledger.credit().mutual(id_, o.redeemer);
      });
      if (due == ledger.obligations().end()) break;
      act(CoinOp{coin::Pay{due->redeemer, due->against_currency, due->amount}});
    }
  }
}

std::vector<Outgoing> Agent::tick() {
  ++tick_count_;
  if (behavior_ == ByzantineBehavior::kWithhold) return {};
  if (!branches_.empty()) return byzantine_tick();

  if (protocol_ == ProtocolKind::kCurrency) issuer_duties();

  if (unacked_content_ && tick_count_ % config_.disclosure_period == 0) disclose();
  refresh_views();

  std::vector<Outgoing> out;
  auto own = local_.latest_by(id_);
  for (const auto& q : graph().contacts_of(id_, protocol_)) {
    auto& view = view_of(q);
    auto acked = acked_mask(local_, view);
    auto roots = needed_roots(local_, acked, graph(), protocol_, q);
    bool send_own = own && !acked[*local_.slot_of(*own)] &&
                    (view.own_latest_sent != own || view.stale || view.announce);
    if (send_own) roots.push_back(*local_.slot_of(*own));
    auto batch = pace(view, closure_diff(local_, acked, q, roots));
    if (!batch.empty() || view.announce || view.reply) out.push_back({q, view.address, std::move(batch)});
    view.reply = false;
    if (view.announce && --view.announce_left == 0) view.announce = false;
  }
  return out;
}

}  // namespace grassroots
