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

// Length-prefixed field encoding shared by blocks, payloads and batches.
// Every field is a 4-byte big-endian length followed by that many bytes.

#include <grassroots/types.hpp>

#include <cstdint>
#include <string_view>

namespace grassroots::wire {

class Writer {
 public:
  void field(ByteView bytes);
  void field(std::string_view text);
  void u8_field(std::uint8_t v);
  void u32_field(std::uint32_t v);
  void u64_field(std::uint64_t v);
  void raw(ByteView bytes) { out_.insert(out_.end(), bytes.begin(), bytes.end()); }

  const Bytes& bytes() const& { return out_; }
  Bytes take() && { return std::move(out_); }

 private:
  void length(std::uint32_t n);
  Bytes out_;
};

/// Strict reader: every accessor throws std::invalid_argument when the
/// input is truncated or a fixed-size field has the wrong length.
class Reader {
 public:
  explicit Reader(ByteView in) : in_(in) {}

  ByteView field();
  ByteView fixed_field(std::size_t size);
  std::uint8_t u8_field();
  std::uint32_t u32_field();
  std::uint64_t u64_field();

  bool done() const { return pos_ == in_.size(); }
  std::size_t position() const { return pos_; }
  void expect_done() const;

 private:
  ByteView in_;
  std::size_t pos_ = 0;
};

bool is_valid_utf8(std::string_view text);

}  // namespace grassroots::wire
