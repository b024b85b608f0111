// Copyright 2026 The SQMG Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

#include "sqmg/circuit/circuit.hpp"

namespace sqmg {

/// Flat form of a circuit: groups become conditional forward jumps, so an
/// execution can be suspended at any measurement and resumed from a program
/// counter. Holds pointers into the circuit, which must outlive it.
class Program {
   public:
    struct Instruction {
        enum class Kind : std::uint8_t { kUnitary, kMeasure, kReset, kJumpUnless };
        Kind kind = Kind::kUnitary;
        const Gate* gate = nullptr;
        Qubit qubit = 0;
        ClassicalSlot slot = 0;
        const ClassicalPredicate* condition = nullptr;
        std::uint32_t jump_to = 0;
    };

    explicit Program(const Circuit& circuit);

    const std::vector<Instruction>& instructions() const noexcept { return code_; }
    /// Index of the first non-unitary instruction. Everything before it is
    /// shot independent.
    std::uint32_t prefix_end() const noexcept { return prefix_end_; }
    std::uint32_t n_qubits() const noexcept { return n_qubits_; }
    std::uint32_t n_classical_slots() const noexcept { return n_slots_; }

   private:
    void emit(const std::vector<Gate>& gates);

    std::vector<Instruction> code_;
    std::uint32_t prefix_end_ = 0;
    std::uint32_t n_qubits_ = 0;
    std::uint32_t n_slots_ = 0;
};

}  // namespace sqmg
