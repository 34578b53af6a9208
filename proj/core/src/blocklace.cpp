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

#include <grassroots/blocklace.hpp>

#include <algorithm>
#include <deque>

namespace grassroots {

bool ConeSet::contains(const BlockHash& h) const {
  if (!owner_) return false;
  auto slot = owner_->slot_of(h);
  return slot && contains_slot(*slot);
}

bool Blocklace::is_resolved(const BlockHash& h) const {
  auto it = index_.find(h);
  return it != index_.end() && nodes_[it->second].resolved;
}

const Block* Blocklace::find(const BlockHash& h) const {
  auto it = index_.find(h);
  return it == index_.end() ? nullptr : &nodes_[it->second].block;
}

const Block& Blocklace::at(const BlockHash& h) const {
  if (auto* b = find(h)) return *b;
  throw BlocklaceError("unknown block " + h.prefix());
}

std::optional<std::uint32_t> Blocklace::slot_of(const BlockHash& h) const {
  auto it = index_.find(h);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<BlockHash> Blocklace::pending() const {
  std::vector<BlockHash> out;
  for (const auto& n : nodes_)
    if (!n.resolved) out.push_back(n.hash);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<BlockHash> Blocklace::resolved_order() const {
  std::vector<BlockHash> out;
  out.reserve(resolved_order_.size());
  for (auto s : resolved_order_) out.push_back(nodes_[s].hash);
  return out;
}

std::vector<BlockHash> Blocklace::stored() const {
  std::vector<BlockHash> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.hash);
  std::sort(out.begin(), out.end());
  return out;
}

std::set<AgentId> Blocklace::creators() const {
  std::set<AgentId> out;
  for (const auto& [agent, _] : by_creator_) out.insert(agent);
  return out;
}

std::set<BlockHash> Blocklace::blocks_by(const AgentId& creator) const {
  auto it = by_creator_.find(creator);
  return it == by_creator_.end() ? std::set<BlockHash>{} : it->second;
}

std::optional<BlockHash> Blocklace::latest_by(const AgentId& creator) const {
  auto it = latest_.find(creator);
  if (it == latest_.end()) return std::nullopt;
  return it->second.second;
}

void Blocklace::mark_cone(std::uint32_t start, std::vector<char>& mask) const {
  std::vector<std::uint32_t> stack(nodes_[start].preds.begin(), nodes_[start].preds.end());
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    if (mask[s]) continue;
    mask[s] = 1;
    for (auto p : nodes_[s].preds)
      if (!mask[p]) stack.push_back(p);
  }
}

ConeSet Blocklace::cone_set(const BlockHash& h, bool include_self) const {
  auto it = index_.find(h);
  if (it == index_.end() || !nodes_[it->second].resolved) throw BlocklaceError("incomplete cone");
  ConeSet out;
  out.owner_ = this;
  out.mask_.assign(nodes_.size(), 0);
  mark_cone(it->second, out.mask_);
  if (include_self) out.mask_[it->second] = 1;
  out.count_ = static_cast<std::size_t>(std::count(out.mask_.begin(), out.mask_.end(), 1));
  return out;
}

std::set<BlockHash> Blocklace::cone(const BlockHash& h) const {
  auto mask = cone_set(h);
  std::set<BlockHash> out;
  for (std::uint32_t s = 0; s < mask.mask_.size(); ++s)
    if (mask.mask_[s]) out.insert(nodes_[s].hash);
  return out;
}

bool Blocklace::in_cone(const BlockHash& anchor, const BlockHash& target) const {
  auto a = index_.find(anchor);
  auto t = index_.find(target);
  if (a == index_.end() || t == index_.end()) return false;
  if (!nodes_[a->second].resolved || !nodes_[t->second].resolved || a->second == t->second) return false;
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<std::uint32_t> stack(nodes_[a->second].preds.begin(), nodes_[a->second].preds.end());
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    if (s == t->second) return true;
    if (seen[s]) continue;
    seen[s] = 1;
    for (auto p : nodes_[s].preds)
      if (!seen[p]) stack.push_back(p);
  }
  return false;
}

std::vector<Blocklace::EquivocationPair> Blocklace::detect_equivocation(const AgentId& creator) const {
  std::vector<EquivocationPair> out;
  auto it = by_creator_.find(creator);
  if (it == by_creator_.end() || it->second.size() < 2) return out;
  std::vector<BlockHash> mine(it->second.begin(), it->second.end());
  std::vector<std::vector<char>> masks;
  masks.reserve(mine.size());
  for (const auto& h : mine) {
    std::vector<char> mask(nodes_.size(), 0);
    mark_cone(index_.at(h), mask);
    masks.push_back(std::move(mask));
  }
  for (std::size_t i = 0; i < mine.size(); ++i) {
    auto si = index_.at(mine[i]);
    for (std::size_t j = i + 1; j < mine.size(); ++j) {
      auto sj = index_.at(mine[j]);
      if (!masks[i][sj] && !masks[j][si]) out.emplace_back(mine[i], mine[j]);
    }
  }
  return out;
}

std::set<BlockHash> Blocklace::equivocating_with(const BlockHash& h) const {
  std::set<BlockHash> out;
  auto it = index_.find(h);
  if (it == index_.end() || !nodes_[it->second].resolved) return out;
  const auto& creator = nodes_[it->second].block.creator;
  std::vector<char> mask(nodes_.size(), 0);
  mark_cone(it->second, mask);
  for (const auto& other : by_creator_.at(creator)) {
    if (other == h) continue;
    auto so = index_.at(other);
    if (mask[so]) continue;
    if (!in_cone(other, h)) out.insert(other);
  }
  return out;
}

bool Blocklace::operator==(const Blocklace& other) const {
  if (nodes_.size() != other.nodes_.size()) return false;
  for (const auto& n : nodes_)
    if (!other.contains(n.hash)) return false;
  return true;
}

std::vector<BlockHash> Blocklace::store(const Block& b, const BlockHash& h) {
  if (index_.contains(h)) return {};
  auto slot = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(Node{h, b, false, 0, {}});
  index_.emplace(h, slot);
  dangling_.erase(h);

  for (const auto& p : b.predecessors) {
    auto it = index_.find(p);
    if (it == index_.end()) {
      dangling_.insert(p);
      waiting_[p].push_back(slot);
      ++nodes_[slot].unresolved;
    } else if (!nodes_[it->second].resolved) {
      waiting_[p].push_back(slot);
      ++nodes_[slot].unresolved;
    }
  }

  std::vector<BlockHash> resolved;
  if (nodes_[slot].unresolved > 0) return resolved;

  std::deque<std::uint32_t> ready{slot};
  while (!ready.empty()) {
    auto s = ready.front();
    ready.pop_front();
    auto& node = nodes_[s];
    node.resolved = true;
    node.preds.clear();
    for (const auto& p : node.block.predecessors) {
      node.preds.push_back(index_.at(p));
      tips_.erase(p);
    }
    tips_.insert(node.hash);
    resolved_order_.push_back(s);
    by_creator_[node.block.creator].insert(node.hash);
    auto [lit, fresh] = latest_.try_emplace(node.block.creator, node.block.seq, node.hash);
    if (!fresh) {
      auto& [seq, hash] = lit->second;
      if (node.block.seq > seq || (node.block.seq == seq && node.hash < hash)) lit->second = {node.block.seq, node.hash};
    }
    resolved.push_back(node.hash);

    auto w = waiting_.find(node.hash);
    if (w == waiting_.end()) continue;
    for (auto dep : w->second)
      if (--nodes_[dep].unresolved == 0) ready.push_back(dep);
    waiting_.erase(w);
  }
  return resolved;
}

std::vector<BlockHash> Blocklace::insert(const Block& b, const Verifier& verifier) {
  auto h = block_hash(b);
  if (index_.contains(h)) return {};
  auto verdict = validate_block(b, *this, verifier);
  if (verdict.rejected()) throw BlocklaceError("invalid block: " + verdict.reason);
  return store(b, h);
}

Verdict validate_block(const Block& b, const Blocklace& local, const Verifier& verifier) {
  Verdict v;
  for (std::size_t i = 1; i < b.predecessors.size(); ++i) {
    if (b.predecessors[i - 1] == b.predecessors[i]) return {Verdict::Kind::kReject, "duplicate predecessor", {}};
    if (b.predecessors[i] < b.predecessors[i - 1])
      return {Verdict::Kind::kReject, "predecessors not canonical", {}};
  }
  Bytes body;
  try {
    body = signed_body(b);
  } catch (const std::exception& e) {
    return {Verdict::Kind::kReject, std::string("malformed: ") + e.what(), {}};
  }
  if (!verifier.verify(b.creator, body, b.signature)) return {Verdict::Kind::kReject, "signature", {}};
  auto self = BlockHash::from_bytes(sha256(body));
  for (const auto& p : b.predecessors) {
    if (p == self) return {Verdict::Kind::kReject, "self reference", {}};
    if (!local.is_resolved(p)) v.missing.push_back(p);
  }
  if (!v.missing.empty()) v.kind = Verdict::Kind::kPending;
  return v;
}

Verdict validate_encoded(ByteView bytes, const Blocklace& local, const Verifier& verifier) {
  Block b;
  try {
    b = decode_block(bytes);
  } catch (const std::exception& e) {
    return {Verdict::Kind::kReject, std::string("malformed: ") + e.what(), {}};
  }
  return validate_block(b, local, verifier);
}

Block create_block_unchecked(const Signer& signer, std::vector<BlockHash> predecessors, Payload payload,
                             std::uint64_t seq) {
  std::sort(predecessors.begin(), predecessors.end());
  predecessors.erase(std::unique(predecessors.begin(), predecessors.end()), predecessors.end());
  Block b;
  b.creator = signer.id();
  b.seq = seq;
  b.predecessors = std::move(predecessors);
  b.payload = std::move(payload);
  b.signature = signer.sign(signed_body(b));
  return b;
}

Block create_block(const Signer& signer, std::vector<BlockHash> predecessors, Payload payload,
                   const Blocklace& local) {
  for (const auto& p : predecessors)
    if (!local.is_resolved(p)) throw BlocklaceError("unresolved predecessor " + p.prefix());
  std::uint64_t seq = 0;
  if (auto latest = local.latest_by(signer.id())) {
    if (std::find(predecessors.begin(), predecessors.end(), *latest) == predecessors.end())
      throw BlocklaceError("self-chain violation");
    seq = local.at(*latest).seq + 1;
  }
  return create_block_unchecked(signer, std::move(predecessors), std::move(payload), seq);
}

Blocklace join(const Blocklace& a, const Blocklace& b) {
  const Blocklace& big = a.size() >= b.size() ? a : b;
  const Blocklace& small = a.size() >= b.size() ? b : a;
  Blocklace out = big;
  for (const auto& n : small.nodes_) out.store(n.block, n.hash);
  return out;
}

}  // namespace grassroots
