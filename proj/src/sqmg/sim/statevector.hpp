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

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "sqmg/circuit/circuit.hpp"
#include "sqmg/common/rng.hpp"

namespace sqmg {

using Amplitude = std::complex<double>;

/// Dense 2^n amplitude vector. Qubit q is bit q of the basis index.
class StateVector {
   public:
    /// |0...0> on `n_qubits` qubits. Allocates exactly 2^n amplitudes.
    explicit StateVector(std::uint32_t n_qubits);

    std::uint32_t n_qubits() const noexcept { return n_qubits_; }
    std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
    std::span<Amplitude> amplitudes() noexcept { return amps_; }

    void apply_ry(Qubit target, double theta);
    void apply_controlled_ry(Qubit control, Qubit target, double theta);
    void apply_cnot(Qubit control, Qubit target);
    void apply_x(Qubit target);
    /// Ry on `target` restricted to basis states where every register is non-zero.
    void apply_presence_ry(const std::vector<std::vector<Qubit>>& registers, Qubit target, double theta);

    /// Unnormalized weights (sum |a|^2 with the qubit at 0, at 1).
    std::pair<double, double> branch_weights(Qubit q) const;
    /// Zeroes the other branch and rescales so the norm is 1 again.
    /// `weight` is the kept branch's weight as returned by branch_weights.
    void project(Qubit q, int bit, double weight);

    double norm_squared() const;

   private:
    std::uint32_t n_qubits_;
    std::vector<Amplitude> amps_;
};

/// Applies one unitary gate. Measure, Reset and ConditionedGroup are handled
/// by the executor and rejected here. Throws kInvalidArgument on an unbound
/// or out-of-range parameter slot.
void apply_gate(StateVector& state, const Gate& gate, std::span<const double> params);

/// Samples a projective Z measurement, collapses and renormalizes.
/// Throws kNumerical when both branches have weight below 1e-14.
int measure_and_collapse(StateVector& state, Qubit q, Rng& rng);

/// Measure, then flip the qubit back to |0> when the outcome was 1.
void reset_qubit(StateVector& state, Qubit q, Rng& rng);

}  // namespace sqmg
