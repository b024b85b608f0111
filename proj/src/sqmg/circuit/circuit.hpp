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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace sqmg {

using Qubit = std::uint32_t;
using ParamSlot = std::uint32_t;
using ClassicalSlot = std::uint32_t;

/// Condition over measured classical bits. Three forms: a single slot equal
/// to a bit, a register of slots that is not all zeros, and the conjunction of
/// two predicates.
struct ClassicalPredicate {
    enum class Form : std::uint8_t { kSlotEquals, kNonZero, kAnd };

    Form form = Form::kNonZero;
    std::vector<ClassicalSlot> slots;
    std::uint8_t bit = 1;
    std::vector<ClassicalPredicate> operands;

    static ClassicalPredicate slot_equals(ClassicalSlot slot, std::uint8_t bit);
    static ClassicalPredicate non_zero(std::vector<ClassicalSlot> slots);
    static ClassicalPredicate both(ClassicalPredicate lhs, ClassicalPredicate rhs);

    bool evaluate(std::span<const std::uint8_t> bits) const;
    /// Every slot read by this predicate, in first-seen order.
    void collect_slots(std::vector<ClassicalSlot>& out) const;

    bool operator==(const ClassicalPredicate&) const = default;
};

struct RyGate {
    Qubit target;
    ParamSlot param;
    bool operator==(const RyGate&) const = default;
};

struct ControlledRyGate {
    Qubit control;
    Qubit target;
    ParamSlot param;
    bool operator==(const ControlledRyGate&) const = default;
};

struct CnotGate {
    Qubit control;
    Qubit target;
    bool operator==(const CnotGate&) const = default;
};

struct PauliXGate {
    Qubit target;
    bool operator==(const PauliXGate&) const = default;
};

struct MeasureGate {
    Qubit target;
    ClassicalSlot slot;
    bool operator==(const MeasureGate&) const = default;
};

struct ResetGate {
    Qubit target;
    bool operator==(const ResetGate&) const = default;
};

/// Ry on `target` that fires only when every listed register is not in
/// |0...0>. This is the coherent form of a presence test; each register acts
/// through anti-controls on its all-zeros state.
struct PresenceRyGate {
    std::vector<std::vector<Qubit>> registers;
    Qubit target;
    ParamSlot param;
    bool operator==(const PresenceRyGate&) const = default;
};

struct Gate;

/// Gate sub-list executed only when `condition` holds for the bits measured so far.
struct ConditionedGroup {
    ClassicalPredicate condition;
    std::vector<Gate> body;
    bool operator==(const ConditionedGroup&) const;
};

struct Gate {
    using Op = std::variant<RyGate, ControlledRyGate, CnotGate, PauliXGate, MeasureGate, ResetGate, PresenceRyGate,
                            ConditionedGroup>;
    Op op;

    template <class T>
        requires(!std::is_same_v<std::remove_cvref_t<T>, Gate>)
    Gate(T&& g) : op(std::forward<T>(g)) {}  // NOLINT(google-explicit-constructor)

    bool operator==(const Gate&) const = default;
};

/// A parameterized gate list. Parameters are referenced by slot and bound at
/// simulation time, so one circuit serves every evaluation of a topology.
class Circuit {
   public:
    Circuit() = default;
    Circuit(std::uint32_t n_qubits, std::uint32_t n_params, std::uint32_t n_classical_slots)
        : n_qubits_(n_qubits), n_params_(n_params), n_classical_slots_(n_classical_slots) {}

    std::uint32_t n_qubits() const noexcept { return n_qubits_; }
    std::uint32_t n_params() const noexcept { return n_params_; }
    std::uint32_t n_classical_slots() const noexcept { return n_classical_slots_; }
    const std::vector<Gate>& gates() const noexcept { return gates_; }

    void append(Gate gate) { gates_.push_back(std::move(gate)); }

    bool operator==(const Circuit&) const = default;

   private:
    std::uint32_t n_qubits_ = 0;
    std::uint32_t n_params_ = 0;
    std::uint32_t n_classical_slots_ = 0;
    std::vector<Gate> gates_;
};

/// Row-major 2x2 real matrix.
using RealMatrix2 = std::array<double, 4>;

/// [[cos(t/2), -sin(t/2)], [sin(t/2), cos(t/2)]]. Throws kInvalidArgument on non-finite input.
RealMatrix2 ry_matrix(double theta);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const noexcept { return violations.empty(); }
};

/// Structural checks. Violations are returned as data; this never throws.
ValidationReport validate_circuit(const Circuit& circuit);

struct CircuitStats {
    std::uint64_t gate_count = 0;
    std::uint64_t two_qubit_gate_count = 0;
    std::uint64_t measure_count = 0;
    std::uint64_t depth = 0;
    bool operator==(const CircuitStats&) const = default;
};

/// Counts primitive gates (group bodies are expanded, the group wrapper is
/// not a gate). Depth is the longest dependency chain through shared qubits or
/// classical slots; a group's predicate slots feed every gate in its body.
CircuitStats circuit_stats(const Circuit& circuit);

/// Line-oriented text form, one gate per line. See README for the grammar.
std::string circuit_to_text(const Circuit& circuit);
Circuit circuit_from_text(const std::string& text);

}  // namespace sqmg
