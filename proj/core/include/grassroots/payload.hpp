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

#include <grassroots/types.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>

namespace grassroots {

struct Noop {
  bool operator==(const Noop&) const = default;
};

/// A feed utterance. Group posts name the founding block of the group.
struct FeedPost {
  std::string text;
  std::optional<BlockHash> group;
  bool operator==(const FeedPost&) const = default;
};

struct Follow {
  AgentId target;
  bool operator==(const Follow&) const = default;
};

struct Unfollow {
  AgentId target;
  bool operator==(const Unfollow&) const = default;
};

enum class GroupOpKind : std::uint8_t { kCreate = 0, kInvite = 1, kRemove = 2, kJoin = 3, kLeave = 4 };

/// For kCreate the group id is ignored (the group is named by the creating
/// block's own hash) and the subject is the founder.
struct GroupOp {
  GroupOpKind kind = GroupOpKind::kCreate;
  BlockHash group;
  AgentId subject;
  bool operator==(const GroupOp&) const = default;
};

namespace coin {

struct OpenCredit {
  AgentId peer;
  bool operator==(const OpenCredit&) const = default;
};
struct CloseCredit {
  AgentId peer;
  bool operator==(const CloseCredit&) const = default;
};
struct Issue {
  std::uint64_t amount = 0;
  bool operator==(const Issue&) const = default;
};
struct Pay {
  AgentId to;
  AgentId currency;
  std::uint64_t amount = 0;
  bool operator==(const Pay&) const = default;
};
struct RedeemRequest {
  AgentId against_currency;
  std::uint64_t amount = 0;
  BlockHash paired_payment;
  bool operator==(const RedeemRequest&) const = default;
};
struct IssuerRuling {
  BlockHash winner;
  std::set<BlockHash> losers;
  bool operator==(const IssuerRuling&) const = default;
};

}  // namespace coin

using CoinOp = std::variant<coin::OpenCredit, coin::CloseCredit, coin::Issue, coin::Pay, coin::RedeemRequest,
                            coin::IssuerRuling>;

using Payload = std::variant<Noop, FeedPost, Follow, Unfollow, GroupOp, CoinOp>;

/// Wire tag of each payload alternative, in variant order.
enum class PayloadTag : std::uint8_t { kNoop = 0, kFeedPost = 1, kFollow = 2, kUnfollow = 3, kGroupOp = 4, kCoinOp = 5 };

inline PayloadTag payload_tag(const Payload& p) { return static_cast<PayloadTag>(p.index()); }

/// Short lower-case name used in traces ("noop", "post", "follow", ...).
std::string payload_tag_name(const Payload& p);

/// Human-readable one-line rendering of the payload body.
std::string describe_payload(const Payload& p);

Bytes encode_payload_body(const Payload& p);
/// Throws std::invalid_argument on any malformed or non-canonical body.
Payload decode_payload_body(PayloadTag tag, ByteView body);

inline const coin::Pay* as_pay(const Payload& p) {
  if (auto* c = std::get_if<CoinOp>(&p)) return std::get_if<coin::Pay>(c);
  return nullptr;
}

}  // namespace grassroots
