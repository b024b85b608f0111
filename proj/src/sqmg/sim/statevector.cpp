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

#include "sqmg/sim/statevector.hpp"

#include <cmath>

#include "sqmg/common/error.hpp"
#include "sqmg/sim/measurement.hpp"

namespace sqmg {

namespace {

constexpr std::uint32_t kMaxAddressableQubits = 48;

/// Calls fn(i0, i1) for every basis pair differing only in `target`.
template <class Fn>
void for_each_pair(std::size_t dim, Qubit target, Fn&& fn) {
    const std::size_t stride = std::size_t{1} << target;
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t k = base; k < base + stride; ++k) {
            fn(k, k + stride);
        }
    }
}

}  // namespace

StateVector::StateVector(std::uint32_t n_qubits) : n_qubits_(n_qubits) {
    require(n_qubits <= kMaxAddressableQubits, ErrorCode::kCapacity,
            "dense state of 2^" + std::to_string(n_qubits) + " amplitudes is not addressable");
    amps_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
    amps_[0] = 1.0;
}

void StateVector::apply_ry(Qubit target, double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    for_each_pair(amps_.size(), target, [&](std::size_t i0, std::size_t i1) {
        const Amplitude a = amps_[i0];
        const Amplitude b = amps_[i1];
        amps_[i0] = c * a - s * b;
        amps_[i1] = s * a + c * b;
    });
}

void StateVector::apply_controlled_ry(Qubit control, Qubit target, double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const std::size_t cmask = std::size_t{1} << control;
    for_each_pair(amps_.size(), target, [&](std::size_t i0, std::size_t i1) {
        if (i0 & cmask) {
            const Amplitude a = amps_[i0];
            const Amplitude b = amps_[i1];
            amps_[i0] = c * a - s * b;
            amps_[i1] = s * a + c * b;
        }
    });
}

void StateVector::apply_cnot(Qubit control, Qubit target) {
    const std::size_t cmask = std::size_t{1} << control;
    for_each_pair(amps_.size(), target, [&](std::size_t i0, std::size_t i1) {
        if (i0 & cmask) {
            std::swap(amps_[i0], amps_[i1]);
        }
    });
}

void StateVector::apply_x(Qubit target) {
    for_each_pair(amps_.size(), target, [&](std::size_t i0, std::size_t i1) { std::swap(amps_[i0], amps_[i1]); });
}

void StateVector::apply_presence_ry(const std::vector<std::vector<Qubit>>& registers, Qubit target, double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    std::vector<std::size_t> masks;
    for (const auto& reg : registers) {
        std::size_t m = 0;
        for (Qubit q : reg) {
            m |= std::size_t{1} << q;
        }
        masks.push_back(m);
    }
    for_each_pair(amps_.size(), target, [&](std::size_t i0, std::size_t i1) {
        for (std::size_t m : masks) {
            if ((i0 & m) == 0) {
                return;
            }
        }
        const Amplitude a = amps_[i0];
        const Amplitude b = amps_[i1];
        amps_[i0] = c * a - s * b;
        amps_[i1] = s * a + c * b;
    });
}

std::pair<double, double> StateVector::branch_weights(Qubit q) const {
    double w0 = 0;
    double w1 = 0;
    for_each_pair(amps_.size(), q, [&](std::size_t i0, std::size_t i1) {
        w0 += std::norm(amps_[i0]);
        w1 += std::norm(amps_[i1]);
    });
    return {w0, w1};
}

void StateVector::project(Qubit q, int bit, double weight) {
    require(weight > 0, ErrorCode::kNumerical, "projection onto a zero-weight branch");
    const double scale = 1.0 / std::sqrt(weight);
    for_each_pair(amps_.size(), q, [&](std::size_t i0, std::size_t i1) {
        if (bit) {
            amps_[i0] = 0;
            amps_[i1] *= scale;
        } else {
            amps_[i0] *= scale;
            amps_[i1] = 0;
        }
    });
}

double StateVector::norm_squared() const {
    double total = 0;
    for (const Amplitude& a : amps_) {
        total += std::norm(a);
    }
    return total;
}

void apply_gate(StateVector& state, const Gate& gate, std::span<const double> params) {
    auto param = [&](ParamSlot p) {
        require(p < params.size(), ErrorCode::kInvalidArgument, "unbound parameter slot " + std::to_string(p));
        require(std::isfinite(params[p]), ErrorCode::kInvalidArgument, "non-finite parameter in slot " + std::to_string(p));
        return params[p];
    };
    if (const auto* g = std::get_if<RyGate>(&gate.op)) {
        state.apply_ry(g->target, param(g->param));
    } else if (const auto* g = std::get_if<ControlledRyGate>(&gate.op)) {
        state.apply_controlled_ry(g->control, g->target, param(g->param));
    } else if (const auto* g = std::get_if<CnotGate>(&gate.op)) {
        state.apply_cnot(g->control, g->target);
    } else if (const auto* g = std::get_if<PauliXGate>(&gate.op)) {
        state.apply_x(g->target);
    } else if (const auto* g = std::get_if<PresenceRyGate>(&gate.op)) {
        state.apply_presence_ry(g->registers, g->target, param(g->param));
    } else {
        fail(ErrorCode::kInvalidArgument, "apply_gate: not a unitary gate");
    }
}

int measure_and_collapse(StateVector& state, Qubit q, Rng& rng) {
    const auto [w0, w1] = state.branch_weights(q);
    const int bit = sample_branch(w0, w1, rng);
    state.project(q, bit, bit ? w1 : w0);
    return bit;
}

void reset_qubit(StateVector& state, Qubit q, Rng& rng) {
    if (measure_and_collapse(state, q, rng)) {
        state.apply_x(q);
    }
}

}  // namespace sqmg
