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

#include <grassroots/wire.hpp>

#include <limits>
#include <stdexcept>

namespace grassroots::wire {

void Writer::length(std::uint32_t n) {
  for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<std::uint8_t>(n >> shift));
}

void Writer::field(ByteView bytes) {
  if (bytes.size() > std::numeric_limits<std::uint32_t>::max()) throw std::length_error("field too long");
  length(static_cast<std::uint32_t>(bytes.size()));
  raw(bytes);
}

void Writer::field(std::string_view text) {
  field(ByteView(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void Writer::u8_field(std::uint8_t v) { field(ByteView(&v, 1)); }

void Writer::u32_field(std::uint32_t v) {
  std::uint8_t b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<std::uint8_t>(v >> (24 - 8 * i));
  field(ByteView(b, 4));
}

void Writer::u64_field(std::uint64_t v) {
  std::uint8_t b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
  field(ByteView(b, 8));
}

ByteView Reader::field() {
  if (in_.size() - pos_ < 4) throw std::invalid_argument("truncated field length");
  std::uint32_t n = 0;
  for (int i = 0; i < 4; ++i) n = (n << 8) | in_[pos_ + i];
  pos_ += 4;
  if (in_.size() - pos_ < n) throw std::invalid_argument("truncated field body");
  auto out = in_.subspan(pos_, n);
  pos_ += n;
  return out;
}

ByteView Reader::fixed_field(std::size_t size) {
  auto f = field();
  if (f.size() != size) throw std::invalid_argument("fixed field has wrong length");
  return f;
}

std::uint8_t Reader::u8_field() { return fixed_field(1)[0]; }

std::uint32_t Reader::u32_field() {
  auto f = fixed_field(4);
  std::uint32_t v = 0;
  for (auto b : f) v = (v << 8) | b;
  return v;
}

std::uint64_t Reader::u64_field() {
  auto f = fixed_field(8);
  std::uint64_t v = 0;
  for (auto b : f) v = (v << 8) | b;
  return v;
}

void Reader::expect_done() const {
  if (!done()) throw std::invalid_argument("trailing bytes");
}

bool is_valid_utf8(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size()) {
    auto c = static_cast<unsigned char>(text[i]);
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xe0) == 0xc0) {
      extra = 1;
      cp = c & 0x1f;
    } else if ((c & 0xf0) == 0xe0) {
      extra = 2;
      cp = c & 0x0f;
    } else if ((c & 0xf8) == 0xf0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= text.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xc0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3f);
    }
    // Overlong forms, surrogates and out-of-range code points.
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) || (extra == 3 && cp < 0x10000)) return false;
    if (cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) return false;
    i += extra + 1;
  }
  return true;
}

}  // namespace grassroots::wire
