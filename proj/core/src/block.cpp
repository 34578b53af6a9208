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

#include <grassroots/block.hpp>
#include <grassroots/crypto.hpp>
#include <grassroots/wire.hpp>

#include <algorithm>
#include <sstream>

namespace grassroots {

namespace {

void write_body(wire::Writer& w, const Block& b) {
  auto preds = b.predecessors;
  std::sort(preds.begin(), preds.end());
  w.field(b.creator.view());
  w.u64_field(b.seq);
  w.u32_field(static_cast<std::uint32_t>(preds.size()));
  for (const auto& p : preds) w.field(p.view());
  w.u8_field(static_cast<std::uint8_t>(payload_tag(b.payload)));
  w.field(encode_payload_body(b.payload));
}

}  // namespace

Bytes signed_body(const Block& b) {
  wire::Writer w;
  write_body(w, b);
  return std::move(w).take();
}

Bytes encode_block(const Block& b) {
  wire::Writer w;
  write_body(w, b);
  w.field(b.signature);
  return std::move(w).take();
}

Block decode_block(ByteView bytes) {
  wire::Reader r(bytes);
  Block b;
  b.creator = AgentId::from_bytes(r.fixed_field(AgentId::kSize));
  b.seq = r.u64_field();
  auto count = r.u32_field();
  // Each predecessor needs at least 36 bytes; reject absurd counts early.
  if (count > bytes.size() / 36) throw std::invalid_argument("predecessor count exceeds input");
  b.predecessors.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    auto h = BlockHash::from_bytes(r.fixed_field(BlockHash::kSize));
    if (!b.predecessors.empty() && !(b.predecessors.back() < h))
      throw std::invalid_argument("predecessors not strictly ascending");
    b.predecessors.push_back(h);
  }
  auto tag = r.u8_field();
  if (tag > static_cast<std::uint8_t>(PayloadTag::kCoinOp)) throw std::invalid_argument("unknown payload tag");
  b.payload = decode_payload_body(static_cast<PayloadTag>(tag), r.field());
  auto sig = r.field();
  b.signature.assign(sig.begin(), sig.end());
  r.expect_done();
  return b;
}

BlockHash block_hash(const Block& b) {
  auto body = signed_body(b);
  auto digest = sha256(body);
  return BlockHash::from_bytes(digest);
}

std::string debug_string(const Block& b, const BlockHash& hash) {
  std::ostringstream os;
  os << b.creator.display() << ':' << b.seq << ':' << hash.prefix() << '[';
  for (std::size_t i = 0; i < b.predecessors.size(); ++i) {
    if (i) os << ',';
    os << b.predecessors[i].prefix();
  }
  os << "] " << payload_tag_name(b.payload);
  return os.str();
}

Bytes encode_batch(const std::vector<Block>& blocks) {
  wire::Writer w;
  w.u32_field(static_cast<std::uint32_t>(blocks.size()));
  for (const auto& b : blocks) w.field(encode_block(b));
  return std::move(w).take();
}

std::vector<Block> decode_batch(ByteView bytes) {
  wire::Reader r(bytes);
  auto n = r.u32_field();
  if (n > bytes.size() / 4) throw std::invalid_argument("batch count exceeds input");
  std::vector<Block> out;
  out.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) out.push_back(decode_block(r.field()));
  r.expect_done();
  return out;
}

}  // namespace grassroots
