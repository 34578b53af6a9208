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

#include <grassroots/crypto.hpp>

#include <openssl/crypto.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

#include <algorithm>
#include <string_view>

namespace grassroots {

namespace {

constexpr std::string_view kKeyDomain = "grassroots/test-mac/v1";

std::array<std::uint8_t, 32> derive_key(const AgentId& id) {
  Bytes material(kKeyDomain.begin(), kKeyDomain.end());
  material.insert(material.end(), id.bytes.begin(), id.bytes.end());
  return sha256(material);
}

}  // namespace

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xf]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw std::invalid_argument("invalid hex character");
  };
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  return out;
}

AgentId AgentId::from_name(std::string_view name) {
  if (name.empty() || name.size() > kSize) throw std::invalid_argument("agent name must be 1..32 bytes");
  AgentId id;
  std::copy(name.begin(), name.end(), id.bytes.begin());
  return id;
}

std::string AgentId::display() const {
  std::size_t len = 0;
  while (len < kSize && bytes[len] != 0) ++len;
  bool printable = len > 0;
  for (std::size_t i = 0; i < len && printable; ++i) printable = bytes[i] > 0x20 && bytes[i] < 0x7f;
  for (std::size_t i = len; i < kSize && printable; ++i) printable = bytes[i] == 0;
  if (printable) return std::string(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(len));
  return prefix();
}

std::array<std::uint8_t, 32> sha256(ByteView data) {
  std::array<std::uint8_t, 32> out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

TestMacScheme::MacSigner::MacSigner(AgentId id) : id_(id) {}

Bytes TestMacScheme::MacSigner::sign(ByteView message) const { return TestMacScheme::mac(id_, message); }

Bytes TestMacScheme::mac(const AgentId& id, ByteView message) {
  auto key = derive_key(id);
  Bytes out(32);
  unsigned int len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), message.data(), message.size(), out.data(), &len);
  out.resize(len);
  return out;
}

bool TestMacScheme::verify(const AgentId& signer, ByteView message, ByteView signature) const {
  auto expected = mac(signer, message);
  return signature.size() == expected.size() &&
         CRYPTO_memcmp(signature.data(), expected.data(), expected.size()) == 0;
}

const Verifier& default_verifier() {
  static const TestMacScheme scheme;
  return scheme;
}

}  // namespace grassroots
