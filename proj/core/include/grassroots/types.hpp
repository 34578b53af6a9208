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

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace grassroots {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView bytes);
/// Throws std::invalid_argument on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

/// Fixed-length byte string with lexicographic ordering. Base for the
/// identifier types below; the Tag keeps them from mixing.
template <typename Tag, std::size_t N>
struct FixedBytes {
  static constexpr std::size_t kSize = N;
  std::array<std::uint8_t, N> bytes{};

  auto operator<=>(const FixedBytes&) const = default;

  ByteView view() const { return {bytes.data(), bytes.size()}; }
  std::string hex() const { return to_hex(view()); }
  std::string prefix(std::size_t hex_chars = 8) const { return hex().substr(0, hex_chars); }
  bool is_zero() const {
    for (auto b : bytes)
      if (b != 0) return false;
    return true;
  }

  static FixedBytes from_view(ByteView v) {
    if (v.size() != N) throw std::invalid_argument("fixed-length field has wrong size");
    FixedBytes out;
    std::copy(v.begin(), v.end(), out.bytes.begin());
    return out;
  }
  static FixedBytes from_hex_string(std::string_view hex) {
    auto raw = from_hex(hex);
    return from_view(raw);
  }
};

struct AgentTag {};
struct HashTag {};

/// Opaque public-key identifier of an agent.
struct AgentId : FixedBytes<AgentTag, 32> {
  /// Builds an id from a short human name (at most 32 bytes, zero padded).
  static AgentId from_name(std::string_view name);
  static AgentId from_bytes(ByteView v) {
    AgentId id;
    static_cast<FixedBytes&>(id) = FixedBytes::from_view(v);
    return id;
  }
  /// The name for ids built with from_name, otherwise an 8-char hex prefix.
  std::string display() const;
};

/// SHA-256 of a block's canonical signed body.
struct BlockHash : FixedBytes<HashTag, 32> {
  static BlockHash from_bytes(ByteView v) {
    BlockHash h;
    static_cast<FixedBytes&>(h) = FixedBytes::from_view(v);
    return h;
  }
  static BlockHash from_hex(std::string_view hex) {
    BlockHash h;
    static_cast<FixedBytes&>(h) = FixedBytes::from_hex_string(hex);
    return h;
  }
};

struct FixedBytesHasher {
  template <typename Tag, std::size_t N>
  std::size_t operator()(const FixedBytes<Tag, N>& v) const noexcept {
    std::size_t h = 0;
    for (std::size_t i = 0; i < sizeof(std::size_t) && i < N; ++i) h = (h << 8) | v.bytes[i];
    return h;
  }
};

}  // namespace grassroots

template <>
struct std::hash<grassroots::BlockHash> {
  std::size_t operator()(const grassroots::BlockHash& h) const noexcept {
    return grassroots::FixedBytesHasher{}(h);
  }
};

template <>
struct std::hash<grassroots::AgentId> {
  std::size_t operator()(const grassroots::AgentId& a) const noexcept {
    // Names share zero tails, so mix the leading bytes.
    std::size_t h = 1469598103934665603ull;
    for (auto b : a.bytes) h = (h ^ b) * 1099511628211ull;
    return h;
  }
};
