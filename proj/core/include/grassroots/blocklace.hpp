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

#include <grassroots/block.hpp>
#include <grassroots/crypto.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace grassroots {

class BlocklaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Verdict {
  enum class Kind { kAccept, kPending, kReject };
  Kind kind = Kind::kAccept;
  std::string reason;             // set on kReject
  std::vector<BlockHash> missing;  // unresolved predecessors, set on kPending

  bool accepted() const { return kind == Kind::kAccept; }
  bool pending() const { return kind == Kind::kPending; }
  bool rejected() const { return kind == Kind::kReject; }
};

class Blocklace;

/// Membership mask over the blocks of one Blocklace. Only valid while that
/// blocklace is alive; blocks inserted later are never members.
class ConeSet {
 public:
  bool contains(const BlockHash& h) const;
  bool contains_slot(std::uint32_t slot) const { return slot < mask_.size() && mask_[slot]; }
  std::size_t size() const { return count_; }

 private:
  friend class Blocklace;
  const Blocklace* owner_ = nullptr;
  std::vector<char> mask_;
  std::size_t count_ = 0;
};

/// An agent's local set of blocks. Blocks whose predecessors are all
/// resolved are themselves resolved; the rest are buffered until their
/// references arrive. All queries other than contains()/find() see only the
/// resolved subgraph.
class Blocklace {
 public:
  using EquivocationPair = std::pair<BlockHash, BlockHash>;

  /// Validates and stores `b`. Returns the blocks that became resolved, in
  /// resolution order (a topological order). Inserting a stored block is a
  /// no-op. Throws BlocklaceError("invalid block: ...") on a Reject verdict.
  std::vector<BlockHash> insert(const Block& b, const Verifier& verifier = default_verifier());

  bool contains(const BlockHash& h) const { return index_.contains(h); }
  bool is_resolved(const BlockHash& h) const;
  const Block* find(const BlockHash& h) const;
  /// Throws BlocklaceError when `h` is not stored.
  const Block& at(const BlockHash& h) const;

  std::size_t size() const { return nodes_.size(); }
  std::size_t resolved_size() const { return resolved_order_.size(); }
  bool empty() const { return nodes_.empty(); }

  /// Hashes referenced by stored blocks but not stored themselves.
  const std::set<BlockHash>& dangling() const { return dangling_; }
  /// Stored blocks that are not yet resolved, ascending.
  std::vector<BlockHash> pending() const;
  /// Every resolved block in the order it became resolved.
  std::vector<BlockHash> resolved_order() const;
  /// Every stored block, ascending by hash.
  std::vector<BlockHash> stored() const;

  std::set<AgentId> creators() const;
  /// Resolved blocks created by `creator`.
  std::set<BlockHash> blocks_by(const AgentId& creator) const;
  /// The resolved `creator` block with the highest seq (ties: smaller hash).
  std::optional<BlockHash> latest_by(const AgentId& creator) const;

  /// Blocks reachable from `h` through one or more predecessor pointers.
  /// Throws BlocklaceError("incomplete cone") when `h` is not resolved.
  std::set<BlockHash> cone(const BlockHash& h) const;
  ConeSet cone_set(const BlockHash& h, bool include_self = false) const;
  /// True iff `target` is in cone(anchor).
  bool in_cone(const BlockHash& anchor, const BlockHash& target) const;

  /// Resolved blocks not referenced by any resolved block.
  const std::set<BlockHash>& tips() const { return tips_; }

  /// All pairs (a, b), a < b, of `creator` blocks neither of which is in the
  /// other's cone. Sorted.
  std::vector<EquivocationPair> detect_equivocation(const AgentId& creator) const;
  /// Same-creator blocks equivocating with `h`.
  std::set<BlockHash> equivocating_with(const BlockHash& h) const;

  /// Set equality over stored blocks.
  bool operator==(const Blocklace& other) const;

  // Slot-level access used by the ordering and dissemination hot paths.
  std::optional<std::uint32_t> slot_of(const BlockHash& h) const;
  const BlockHash& hash_at(std::uint32_t slot) const { return nodes_[slot].hash; }
  const Block& block_at(std::uint32_t slot) const { return nodes_[slot].block; }
  const std::vector<std::uint32_t>& pred_slots(std::uint32_t slot) const { return nodes_[slot].preds; }

 private:
  friend Blocklace join(const Blocklace& a, const Blocklace& b);

  struct Node {
    BlockHash hash;
    Block block;
    bool resolved = false;
    std::uint32_t unresolved = 0;
    std::vector<std::uint32_t> preds;  // filled on resolution
  };

  std::vector<BlockHash> store(const Block& b, const BlockHash& h);
  void mark_cone(std::uint32_t start, std::vector<char>& mask) const;

  std::vector<Node> nodes_;
  std::unordered_map<BlockHash, std::uint32_t> index_;
  std::unordered_map<BlockHash, std::vector<std::uint32_t>> waiting_;
  std::set<BlockHash> dangling_;
  std::vector<std::uint32_t> resolved_order_;
  std::map<AgentId, std::set<BlockHash>> by_creator_;
  std::map<AgentId, std::pair<std::uint64_t, BlockHash>> latest_;
  std::set<BlockHash> tips_;
};

/// Accept iff the signature verifies, the block is canonical (predecessors
/// strictly ascending, so duplicate-free) and does not point at itself;
/// Pending iff acceptable but some predecessor is not resolved in `local`.
Verdict validate_block(const Block& b, const Blocklace& local, const Verifier& verifier = default_verifier());

/// Decodes then validates; a decoding failure is Reject("malformed: ...").
Verdict validate_encoded(ByteView bytes, const Blocklace& local, const Verifier& verifier = default_verifier());

/// Creates and signs the next block of `signer` on top of `predecessors`.
/// Correct-agent discipline: every predecessor must be resolved in `local`
/// ("unresolved predecessor") and, unless this is the creator's first
/// block, the creator's latest block must be among them ("self-chain
/// violation"). Predecessors are sorted and de-duplicated.
Block create_block(const Signer& signer, std::vector<BlockHash> predecessors, Payload payload,
                   const Blocklace& local);

/// Signs an arbitrary block with no discipline checks; models Byzantine
/// creators in tests and in the simulator.
Block create_block_unchecked(const Signer& signer, std::vector<BlockHash> predecessors, Payload payload,
                             std::uint64_t seq);

/// CRDT join: the union of both block sets.
Blocklace join(const Blocklace& a, const Blocklace& b);

}  // namespace grassroots
