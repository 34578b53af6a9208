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

#include <grassroots/payload.hpp>
#include <grassroots/types.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace grassroots {

/// A signed, hash-addressed node of the blocklace.
///
/// Canonical signed body, each item a length-prefixed field (4-byte
/// big-endian length):
///
///   creator (32) | seq (u64 BE) | predecessor count (u32 BE) |
///   predecessors (32 each, strictly ascending) | payload tag (1) | payload body
///
/// The wire encoding is the body followed by one more field carrying the
/// signature. The block hash is SHA-256 of the body.
struct Block {
  AgentId creator;
  std::uint64_t seq = 0;
  std::vector<BlockHash> predecessors;
  Payload payload;
  Bytes signature;

  bool operator==(const Block&) const = default;

  bool is_genesis() const { return seq == 0; }
};

Bytes signed_body(const Block& b);
Bytes encode_block(const Block& b);
/// Strict decoder. Throws std::invalid_argument on malformed, truncated or
/// non-canonical input (including unsorted predecessors).
Block decode_block(ByteView bytes);

BlockHash block_hash(const Block& b);

/// `creator:seq:hash-prefix[pred-prefix,...] tag` trace form.
std::string debug_string(const Block& b, const BlockHash& hash);
inline std::string debug_string(const Block& b) { return debug_string(b, block_hash(b)); }

/// Message batch: count field followed by one field per encoded block.
Bytes encode_batch(const std::vector<Block>& blocks);
std::vector<Block> decode_batch(ByteView bytes);

}  // namespace grassroots
