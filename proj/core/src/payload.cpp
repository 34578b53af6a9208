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

#include <grassroots/payload.hpp>
#include <grassroots/wire.hpp>

#include <sstream>
#include <stdexcept>

namespace grassroots {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

enum class CoinTag : std::uint8_t { kOpenCredit = 0, kCloseCredit = 1, kIssue = 2, kPay = 3, kRedeem = 4, kRuling = 5 };

void require_positive(std::uint64_t amount) {
  if (amount == 0) throw std::invalid_argument("coin amount must be positive");
}

void encode_coin(wire::Writer& w, const CoinOp& op) {
  w.u8_field(static_cast<std::uint8_t>(op.index()));
  std::visit(Overloaded{
                 [&](const coin::OpenCredit& o) { w.field(o.peer.view()); },
                 [&](const coin::CloseCredit& o) { w.field(o.peer.view()); },
                 [&](const coin::Issue& o) {
                   require_positive(o.amount);
                   w.u64_field(o.amount);
                 },
                 [&](const coin::Pay& o) {
                   require_positive(o.amount);
                   w.field(o.to.view());
                   w.field(o.currency.view());
                   w.u64_field(o.amount);
                 },
                 [&](const coin::RedeemRequest& o) {
                   require_positive(o.amount);
                   w.field(o.against_currency.view());
                   w.u64_field(o.amount);
                   w.field(o.paired_payment.view());
                 },
                 [&](const coin::IssuerRuling& o) {
                   w.field(o.winner.view());
                   w.u32_field(static_cast<std::uint32_t>(o.losers.size()));
                   for (const auto& l : o.losers) w.field(l.view());
                 },
             },
             op);
}

AgentId read_agent(wire::Reader& r) { return AgentId::from_bytes(r.fixed_field(AgentId::kSize)); }
BlockHash read_hash(wire::Reader& r) { return BlockHash::from_bytes(r.fixed_field(BlockHash::kSize)); }

std::uint64_t read_amount(wire::Reader& r) {
  auto v = r.u64_field();
  require_positive(v);
  return v;
}

CoinOp decode_coin(wire::Reader& r) {
  switch (static_cast<CoinTag>(r.u8_field())) {
    case CoinTag::kOpenCredit:
      return coin::OpenCredit{read_agent(r)};
    case CoinTag::kCloseCredit:
      return coin::CloseCredit{read_agent(r)};
    case CoinTag::kIssue:
      return coin::Issue{read_amount(r)};
    case CoinTag::kPay: {
      coin::Pay p;
      p.to = read_agent(r);
      p.currency = read_agent(r);
      p.amount = read_amount(r);
      return p;
    }
    case CoinTag::kRedeem: {
      coin::RedeemRequest q;
      q.against_currency = read_agent(r);
      q.amount = read_amount(r);
      q.paired_payment = read_hash(r);
      return q;
    }
    case CoinTag::kRuling: {
      coin::IssuerRuling ruling;
      ruling.winner = read_hash(r);
      auto n = r.u32_field();
      std::optional<BlockHash> prev;
      for (std::uint32_t i = 0; i < n; ++i) {
        auto h = read_hash(r);
        if (prev && !(*prev < h)) throw std::invalid_argument("ruling losers not strictly ascending");
        prev = h;
        ruling.losers.insert(h);
      }
      return ruling;
    }
  }
  throw std::invalid_argument("unknown coin op tag");
}

}  // namespace

std::string payload_tag_name(const Payload& p) {
  return std::visit(Overloaded{
                        [](const Noop&) -> std::string { return "noop"; },
                        [](const FeedPost&) -> std::string { return "post"; },
                        [](const Follow&) -> std::string { return "follow"; },
                        [](const Unfollow&) -> std::string { return "unfollow"; },
                        [](const GroupOp&) -> std::string { return "group"; },
                        [](const CoinOp& c) -> std::string {
                          static constexpr const char* kNames[] = {"open-credit", "close-credit", "issue",
                                                                   "pay",         "redeem",       "ruling"};
                          return kNames[c.index()];
                        },
                    },
                    p);
}

std::string describe_payload(const Payload& p) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const Noop&) { os << "noop"; },
                 [&](const FeedPost& f) {
                   os << "post";
                   if (f.group) os << " group=" << f.group->prefix();
                   os << " \"" << f.text << "\"";
                 },
                 [&](const Follow& f) { os << "follow " << f.target.display(); },
                 [&](const Unfollow& f) { os << "unfollow " << f.target.display(); },
                 [&](const GroupOp& g) {
                   static constexpr const char* kKinds[] = {"create", "invite", "remove", "join", "leave"};
                   os << "group " << kKinds[static_cast<int>(g.kind)];
                   if (g.kind != GroupOpKind::kCreate) os << " " << g.group.prefix() << " " << g.subject.display();
                 },
                 [&](const CoinOp& c) {
                   std::visit(Overloaded{
                                  [&](const coin::OpenCredit& o) { os << "open-credit " << o.peer.display(); },
                                  [&](const coin::CloseCredit& o) { os << "close-credit " << o.peer.display(); },
                                  [&](const coin::Issue& o) { os << "issue " << o.amount; },
                                  [&](const coin::Pay& o) {
                                    os << "pay " << o.to.display() << " " << o.currency.display() << " " << o.amount;
                                  },
                                  [&](const coin::RedeemRequest& o) {
                                    os << "redeem " << o.against_currency.display() << " " << o.amount << " "
                                       << o.paired_payment.prefix();
                                  },
                                  [&](const coin::IssuerRuling& o) {
                                    os << "ruling winner=" << o.winner.prefix() << " losers=" << o.losers.size();
                                  },
                              },
                              c);
                 },
             },
             p);
  return os.str();
}

Bytes encode_payload_body(const Payload& p) {
  wire::Writer w;
  std::visit(Overloaded{
                 [&](const Noop&) {},
                 [&](const FeedPost& f) {
                   if (!wire::is_valid_utf8(f.text)) throw std::invalid_argument("post text is not valid UTF-8");
                   w.field(std::string_view(f.text));
                   if (f.group)
                     w.field(f.group->view());
                   else
                     w.field(ByteView{});
                 },
                 [&](const Follow& f) { w.field(f.target.view()); },
                 [&](const Unfollow& f) { w.field(f.target.view()); },
                 [&](const GroupOp& g) {
                   w.u8_field(static_cast<std::uint8_t>(g.kind));
                   w.field(g.group.view());
                   w.field(g.subject.view());
                 },
                 [&](const CoinOp& c) { encode_coin(w, c); },
             },
             p);
  return std::move(w).take();
}

Payload decode_payload_body(PayloadTag tag, ByteView body) {
  wire::Reader r(body);
  Payload out;
  switch (tag) {
    case PayloadTag::kNoop:
      out = Noop{};
      break;
    case PayloadTag::kFeedPost: {
      FeedPost f;
      auto text = r.field();
      f.text.assign(text.begin(), text.end());
      if (!wire::is_valid_utf8(f.text)) throw std::invalid_argument("post text is not valid UTF-8");
      auto group = r.field();
      if (group.size() == BlockHash::kSize)
        f.group = BlockHash::from_bytes(group);
      else if (!group.empty())
        throw std::invalid_argument("bad group field");
      out = std::move(f);
      break;
    }
    case PayloadTag::kFollow:
      out = Follow{read_agent(r)};
      break;
    case PayloadTag::kUnfollow:
      out = Unfollow{read_agent(r)};
      break;
    case PayloadTag::kGroupOp: {
      GroupOp g;
      auto kind = r.u8_field();
      if (kind > static_cast<std::uint8_t>(GroupOpKind::kLeave)) throw std::invalid_argument("unknown group op");
      g.kind = static_cast<GroupOpKind>(kind);
      g.group = read_hash(r);
      g.subject = read_agent(r);
      out = g;
      break;
    }
    case PayloadTag::kCoinOp:
      out = decode_coin(r);
      break;
    default:
      throw std::invalid_argument("unknown payload tag");
  }
  r.expect_done();
  return out;
}

}  // namespace grassroots
