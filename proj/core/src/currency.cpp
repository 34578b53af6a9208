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

#include <algorithm>
#include <sstream>

namespace grassroots {

namespace {

const coin::IssuerRuling* as_ruling(const Block& b) {
  if (auto* c = std::get_if<CoinOp>(&b.payload)) return std::get_if<coin::IssuerRuling>(c);
  return nullptr;
}

const coin::Pay* resolved_pay(const Blocklace& local, const BlockHash& h) {
  if (!local.is_resolved(h)) return nullptr;
  return as_pay(local.at(h).payload);
}

bool mutually_unreferenced(const Blocklace& local, const BlockHash& a, const BlockHash& b) {
  return a != b && !local.in_cone(a, b) && !local.in_cone(b, a);
}

}  // namespace

std::uint64_t Ledger::balance(const AgentId& holder, const AgentId& currency) const {
  auto it = holdings_.find({holder, currency});
  return it == holdings_.end() ? 0 : it->second;
}

std::uint64_t Ledger::issued(const AgentId& currency) const {
  auto it = issued_.find(currency);
  return it == issued_.end() ? 0 : it->second;
}

std::set<AgentId> Ledger::currencies() const {
  std::set<AgentId> out;
  for (const auto& [c, _] : issued_) out.insert(c);
  return out;
}

std::vector<Obligation> Ledger::outstanding() const {
  std::vector<Obligation> out;
  for (const auto& o : obligations_)
    if (!o.settled()) out.push_back(o);
  return out;
}

bool Ledger::unsettleable(const Obligation& o) const {
  return !o.settled() && balance(o.issuer, o.against_currency) < o.amount;
}

void Ledger::credit_balance(const AgentId& holder, const AgentId& currency, std::uint64_t amount) {
  holdings_[{holder, currency}] += amount;
}

void Ledger::debit_balance(const AgentId& holder, const AgentId& currency, std::uint64_t amount) {
  auto it = holdings_.find({holder, currency});
  it->second -= amount;
  if (it->second == 0) holdings_.erase(it);
}

void Ledger::apply_pay(const Blocklace& local, const BlockHash& h, const Block& b, const coin::Pay& pay) {
  if (pay.to == b.creator) return diagnose(h, "self payment");
  if (!credit_.mutual(b.creator, pay.to)) return diagnose(h, "no credit line");
  if (balance(b.creator, pay.currency) < pay.amount) return diagnose(h, "insufficient balance");
  debit_balance(b.creator, pay.currency, pay.amount);
  credit_balance(pay.to, pay.currency, pay.amount);
  applied_.insert(h);

  // Settles the earliest matching obligation that causally precedes it.
  for (auto& o : obligations_) {
    if (o.settled() || o.issuer != b.creator || o.redeemer != pay.to || o.against_currency != pay.currency ||
        o.amount != pay.amount)
      continue;
    if (!local.in_cone(h, o.request)) continue;
    o.settlement = h;
    break;
  }
}

void Ledger::apply_redeem(const Blocklace& local, const BlockHash& h, const Block& b,
                          const coin::RedeemRequest& req) {
  const auto& paired = req.paired_payment;
  if (!applied_.contains(paired) || !local.in_cone(h, paired)) return diagnose(h, "non-matching payment");
  const auto& pay_block = local.at(paired);
  const auto* pay = as_pay(pay_block.payload);
  if (pay_block.creator != b.creator || pay->currency != pay->to || pay->amount != req.amount)
    return diagnose(h, "non-matching payment");
  if (req.against_currency == pay->to) return diagnose(h, "redeem against the redeemed currency");
  if (!redeemed_payments_.insert(paired).second) return diagnose(h, "payment already redeemed");
  obligations_.push_back({h, pay->to, b.creator, req.against_currency, req.amount, std::nullopt});
}

void Ledger::apply(const Blocklace& local, const BlockHash& h, const Block& b) {
  auto* op = std::get_if<CoinOp>(&b.payload);
  if (!op) return;
  if (auto* o = std::get_if<coin::OpenCredit>(op)) {
    if (o->peer == b.creator) return diagnose(h, "self credit line");
    credit_.open(b.creator, o->peer);
  } else if (auto* c = std::get_if<coin::CloseCredit>(op)) {
    credit_.close(b.creator, c->peer);
  } else if (auto* i = std::get_if<coin::Issue>(op)) {
    issued_[b.creator] += i->amount;
    credit_balance(b.creator, b.creator, i->amount);
  } else if (auto* p = std::get_if<coin::Pay>(op)) {
    apply_pay(local, h, b, *p);
  } else if (auto* r = std::get_if<coin::RedeemRequest>(op)) {
    apply_redeem(local, h, b, *r);
  } else if (auto* ruling = std::get_if<coin::IssuerRuling>(op)) {
    if (!is_valid_ruling(local, h)) return diagnose(h, "invalid ruling");
    bool conflict = ruled_losers_.contains(ruling->winner);
    for (const auto& l : ruling->losers) conflict = conflict || ruled_winners_.contains(l);
    if (conflict) {
      ruling_equivocators_.insert(b.creator);
      return diagnose(h, "conflicting ruling");
    }
    ruled_winners_.emplace(ruling->winner, h);
    ruled_losers_.insert(ruling->losers.begin(), ruling->losers.end());
  }
}

Ledger& apply_coin_op(Ledger& ledger, const Blocklace& local, const BlockHash& h) {
  ledger.apply(local, h, local.at(h));
  return ledger;
}

Ledger& redeem(Ledger& ledger, const Blocklace& local, const BlockHash& request_block) {
  const auto& b = local.at(request_block);
  auto* op = std::get_if<CoinOp>(&b.payload);
  if (!op || !std::holds_alternative<coin::RedeemRequest>(*op))
    throw CurrencyError("not a redemption request");
  ledger.apply(local, request_block, b);
  return ledger;
}

bool is_valid_ruling(const Blocklace& local, const BlockHash& ruling_block) {
  if (!local.is_resolved(ruling_block)) return false;
  const auto& rb = local.at(ruling_block);
  const auto* ruling = as_ruling(rb);
  if (!ruling || ruling->losers.empty() || ruling->losers.contains(ruling->winner)) return false;
  const auto* winner = resolved_pay(local, ruling->winner);
  if (!winner || winner->currency != rb.creator) return false;
  const auto& payer = local.at(ruling->winner).creator;
  for (const auto& l : ruling->losers) {
    const auto* loser = resolved_pay(local, l);
    if (!loser || loser->currency != rb.creator || local.at(l).creator != payer) return false;
    if (!mutually_unreferenced(local, ruling->winner, l)) return false;
  }
  return true;
}

namespace {

Replay replay_log(const Blocklace& local, OrderedLog log) {
  Replay out;
  std::set<BlockHash> winners;
  for (const auto& h : log.sequence) {
    const auto* ruling = as_ruling(local.at(h));
    if (!ruling || !is_valid_ruling(local, h)) continue;
    bool conflict = out.exclusions.contains(ruling->winner);
    for (const auto& l : ruling->losers) conflict = conflict || winners.contains(l);
    if (conflict) continue;
    winners.insert(ruling->winner);
    out.exclusions.insert(ruling->losers.begin(), ruling->losers.end());
  }
  std::erase_if(log.sequence, [&](const BlockHash& h) { return out.exclusions.contains(h); });
  for (const auto& h : log.sequence) out.ledger.apply(local, h, local.at(h));
  out.log = std::move(log);
  return out;
}

}  // namespace

Replay replay_cone(const Blocklace& local, const BlockHash& anchor) {
  return replay_log(local, order_cone(local, anchor));
}

Replay replay_all(const Blocklace& local) { return replay_log(local, order_all(local)); }

coin::IssuerRuling resolve_doublespend(const Blocklace& local, const AgentId& issuer,
                                       const std::pair<BlockHash, BlockHash>& equivocation) {
  const auto& [a, b] = equivocation;
  const auto* pa = resolved_pay(local, a);
  const auto* pb = resolved_pay(local, b);
  if (!pa || !pb || pa->currency != issuer || pb->currency != issuer ||
      local.at(a).creator != local.at(b).creator || !mutually_unreferenced(local, a, b))
    throw CurrencyError("not an equivocation");
  coin::IssuerRuling ruling;
  ruling.winner = std::min(a, b);
  ruling.losers.insert(std::max(a, b));
  return ruling;
}

std::vector<std::pair<BlockHash, BlockHash>> unruled_doublespends(const Blocklace& local, const AgentId& issuer) {
  std::set<std::pair<BlockHash, BlockHash>> covered;
  for (const auto& h : local.blocks_by(issuer)) {
    const auto* ruling = as_ruling(local.at(h));
    if (!ruling) continue;
    std::vector<BlockHash> named(ruling->losers.begin(), ruling->losers.end());
    named.push_back(ruling->winner);
    for (const auto& x : named)
      for (const auto& y : named)
        if (x < y) covered.insert({x, y});
  }
  std::vector<std::pair<BlockHash, BlockHash>> out;
  for (const auto& creator : local.creators()) {
    for (const auto& pair : local.detect_equivocation(creator)) {
      const auto* pa = as_pay(local.at(pair.first).payload);
      const auto* pb = as_pay(local.at(pair.second).payload);
      if (!pa || !pb || pa->currency != issuer || pb->currency != issuer) continue;
      if (!covered.contains(pair)) out.push_back(pair);
    }
  }
  return out;
}

SupplyMetrics supply_metrics(const Ledger& ledger) {
  SupplyMetrics out;
  for (const auto& c : ledger.currencies()) out[c].issued = ledger.issued(c);
  for (const auto& [key, amount] : ledger.holdings()) {
    const auto& [holder, currency] = key;
    auto& s = out[currency];
    if (holder == currency)
      s.held_by_issuer += amount;
    else
      s.in_circulation += amount;
  }
  return out;
}

std::int64_t net_worth(const Ledger& ledger, const AgentId& agent) {
  std::int64_t worth = 0;
  for (const auto& [key, amount] : ledger.holdings())
    if (key.first == agent && key.second != agent) worth += static_cast<std::int64_t>(amount);
  worth -= static_cast<std::int64_t>(ledger.issued(agent) - ledger.balance(agent, agent));
  return worth;
}

std::set<AgentId> discredited_issuers(const Blocklace& local, const Ledger& ledger) {
  std::set<AgentId> out = ledger.ruling_equivocators();
  for (const auto& c : ledger.currencies())
    if (!local.detect_equivocation(c).empty()) out.insert(c);
  for (const auto& o : ledger.outstanding()) out.insert(o.issuer);
  return out;
}

std::string dump_ledger(const Ledger& ledger) {
  std::ostringstream os;
  auto supply = supply_metrics(ledger);
  for (const auto& [currency, s] : supply) {
    os << "currency " << currency.display() << " issued=" << s.issued << " circulation=" << s.in_circulation
       << " issuer=" << s.held_by_issuer << '\n';
    for (const auto& [key, amount] : ledger.holdings())
      if (key.second == currency) os << "  " << key.first.display() << '\t' << amount << '\n';
  }
  for (const auto& o : ledger.obligations()) {
    os << "obligation " << o.request.prefix() << ' ' << o.issuer.display() << "->" << o.redeemer.display() << ' '
       << o.amount << ' ' << o.against_currency.display() << ' '
       << (o.settled() ? "settled " + o.settlement->prefix() : (ledger.unsettleable(o) ? "unsettleable" : "open"))
       << '\n';
  }
  return os.str();
}

}  // namespace grassroots
