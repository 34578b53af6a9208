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

#include <memory>

namespace grassroots {

std::array<std::uint8_t, 32> sha256(ByteView data);

/// Signing capability held by a single agent.
class Signer {
 public:
  virtual ~Signer() = default;
  virtual const AgentId& id() const = 0;
  virtual Bytes sign(ByteView message) const = 0;
};

class Verifier {
 public:
  virtual ~Verifier() = default;
  virtual bool verify(const AgentId& signer, ByteView message, ByteView signature) const = 0;
};

/// Deterministic keyed-MAC scheme for simulation and tests. The MAC key of
/// an agent is derived from its public id, so anyone can forge signatures:
/// NOT for production use. It gives non-repudiation and tamper detection
/// only against accidental or in-simulation mutation.
class TestMacScheme final : public Verifier {
 public:
  class MacSigner final : public Signer {
   public:
    explicit MacSigner(AgentId id);
    const AgentId& id() const override { return id_; }
    Bytes sign(ByteView message) const override;

   private:
    AgentId id_;
  };

  static MacSigner signer_for(const AgentId& id) { return MacSigner(id); }

  bool verify(const AgentId& signer, ByteView message, ByteView signature) const override;

  static Bytes mac(const AgentId& id, ByteView message);
};

/// Process-wide default verifier (the test MAC scheme).
const Verifier& default_verifier();

}  // namespace grassroots
