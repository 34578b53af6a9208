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
#include <grassroots/social.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace grassroots {

class CurrencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An issuer's duty to pay `amount` of `against_currency` to the redeemer,
/// created by a RedeemRequest and settled by a later matching Pay.
struct Obligation {
  BlockHash request;
  AgentId issuer;
  AgentId redeemer;
  AgentId against_currency;
  std::uint64_t amount = 0;
  std::optional<BlockHash> settlement;

  bool settled() const { return settlement.has_value(); }
  bool operator==(const Obligation&) const = default;
};

struct CurrencySupply {
  std::uint64_t issued = 0;
  std::uint64_t in_circulation = 0;
  std::uint64_t held_by_issuer = 0;
  bool operator==(const CurrencySupply&) const = default;
};

using SupplyMetrics = std::map<AgentId, CurrencySupply>;

/// Balances, credit lines and redemption obligations replayed from coin
/// ops. Illegal ops (overdraft, no credit line, mismatched redemption,
/// rulings by non-issuers) are no-ops with a diagnostic.
class Ledger {
 public:
  using HoldingKey = std::pair<AgentId, AgentId>;  // (holder, currency)

  /// Applies the block's coin op. Causal checks (paired payment, settlement
  /// after request) consult `local`.
  void apply(const Blocklace& local, const BlockHash& h, const Block& b);

  std::uint64_t balance(const AgentId& holder, const AgentId& currency) const;
  /// Non-zero balances only.
  const std::map<HoldingKey, std::uint64_t>& holdings() const { return holdings_; }
  std::uint64_t issued(const AgentId& currency) const;
  std::set<AgentId> currencies() const;

  const CreditLines& credit() const { return credit_; }
  const std::vector<Obligation>& obligations() const { return obligations_; }
  std::vector<Obligation> outstanding() const;
  /// Outstanding and the issuer cannot currently cover it.
  bool unsettleable(const Obligation& o) const;

  /// Pay blocks whose transfer took effect.
  const std::set<BlockHash>& applied_payments() const { return applied_; }
  /// Ruling winners, keyed by winning payment.
  const std::map<BlockHash, BlockHash>& ruled_winners() const { return ruled_winners_; }
  /// Issuers caught issuing conflicting rulings.
  const std::set<AgentId>& ruling_equivocators() const { return ruling_equivocators_; }

  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

  bool operator==(const Ledger& other) const { return holdings_ == other.holdings_ && issued_ == other.issued_; }

 private:
  void diagnose(const BlockHash& h, std::string message) { diagnostics_.push_back({h, std::move(message)}); }
  void credit_balance(const AgentId& holder, const AgentId& currency, std::uint64_t amount);
  void debit_balance(const AgentId& holder, const AgentId& currency, std::uint64_t amount);
  void apply_pay(const Blocklace& local, const BlockHash& h, const Block& b, const coin::Pay& pay);
  void apply_redeem(const Blocklace& local, const BlockHash& h, const Block& b, const coin::RedeemRequest& req);

  std::map<HoldingKey, std::uint64_t> holdings_;
  std::map<AgentId, std::uint64_t> issued_;
  CreditLines credit_;
  std::vector<Obligation> obligations_;
  std::set<BlockHash> applied_;
  std::set<BlockHash> redeemed_payments_;
  std::map<BlockHash, BlockHash> ruled_winners_;
  std::set<BlockHash> ruled_losers_;
  std::set<AgentId> ruling_equivocators_;
  std::vector<Diagnostic> diagnostics_;
};

/// Single-step replay: applies one coin op to `ledger`.
Ledger& apply_coin_op(Ledger& ledger, const Blocklace& local, const BlockHash& h);

/// Is `ruling_block` a ruling by the issuer of the payments it names, over
/// payments that really equivocate with the winner?
bool is_valid_ruling(const Blocklace& local, const BlockHash& ruling_block);

struct Replay {
  Ledger ledger;
  std::set<BlockHash> exclusions;  // ruling losers
  OrderedLog log;                  // with exclusions removed
};

/// Collects issuer rulings in the ordered set, then folds every coin op in
/// order with the ruling losers excluded.
Replay replay_cone(const Blocklace& local, const BlockHash& anchor);
Replay replay_all(const Blocklace& local);

/// Records the redemption obligation of a RedeemRequest block on `ledger`.
/// Equivalent to apply_coin_op for request blocks; kept separate because
/// it is the redemption entry point.
Ledger& redeem(Ledger& ledger, const Blocklace& local, const BlockHash& request_block);

/// Deterministic ruling over an equivocating pair of Pay blocks in the
/// issuer's currency: the smaller hash wins. Throws CurrencyError("not an
/// equivocation") when the blocks are not mutually non-referring Pays of
/// the same payer in `issuer`'s currency.
coin::IssuerRuling resolve_doublespend(const Blocklace& local, const AgentId& issuer,
                                       const std::pair<BlockHash, BlockHash>& equivocation);

/// Equivocating Pay pairs in `issuer`'s currency not yet covered by one of
/// the issuer's own rulings in `local`.
std::vector<std::pair<BlockHash, BlockHash>> unruled_doublespends(const Blocklace& local, const AgentId& issuer);

SupplyMetrics supply_metrics(const Ledger& ledger);

/// Sum of foreign coins held minus own coins in others' hands, at 1:1.
std::int64_t net_worth(const Ledger& ledger, const AgentId& agent);

/// Issuers with a proven equivocation, conflicting rulings or an
/// outstanding redemption obligation.
std::set<AgentId> discredited_issuers(const Blocklace& local, const Ledger& ledger);

/// Sorted text: one `currency` header per currency followed by holder rows,
/// then outstanding obligations.
std::string dump_ledger(const Ledger& ledger);

}  // namespace grassroots
