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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <thread>
#include <vector>

#include "sqmg/common/error.hpp"
#include "sqmg/common/rng.hpp"
#include "sqmg/sim/measurement.hpp"
#include "sqmg/sim/mps.hpp"
#include "sqmg/sim/program.hpp"
#include "sqmg/sim/statevector.hpp"

namespace sqmg {

/// Exact outcome distribution keyed by the full classical-slot bit vector.
using Distribution = std::map<std::vector<std::uint8_t>, double>;

/// Per-instruction truncation statistics for an MPS run.
struct TruncationLog {
    std::vector<double> discarded;       // summed over shots
    std::vector<std::uint32_t> bond_dim;  // max over shots
    std::uint64_t shots = 0;

    void resize(std::size_t n) {
        discarded.assign(n, 0.0);
        bond_dim.assign(n, 0);
    }
    void record(std::size_t instruction, const TruncationRecord& r) {
        discarded[instruction] += r.discarded_weight;
        bond_dim[instruction] = std::max(bond_dim[instruction], r.bond_dim);
    }
    void merge(const TruncationLog& other) {
        for (std::size_t i = 0; i < discarded.size(); ++i) {
            discarded[i] += other.discarded[i];
            bond_dim[i] = std::max(bond_dim[i], other.bond_dim[i]);
        }
        shots += other.shots;
    }
    /// Mean discarded weight per shot, summed over instructions.
    double total_discarded() const {
        double t = 0;
        for (double d : discarded) {
            t += d;
        }
        return shots ? t / static_cast<double>(shots) : t;
    }
    std::uint32_t max_bond_dim() const {
        std::uint32_t m = 1;
        for (auto d : bond_dim) {
            m = std::max(m, d);
        }
        return m;
    }
};

namespace detail {

inline double bound_param(std::span<const double> params, ParamSlot p) {
    require(p < params.size(), ErrorCode::kInvalidArgument, "unbound parameter slot " + std::to_string(p));
    require(std::isfinite(params[p]), ErrorCode::kInvalidArgument, "non-finite parameter in slot " + std::to_string(p));
    return params[p];
}

inline TruncationRecord apply_unitary(StateVector& s, const Gate& g, std::span<const double> params) {
    apply_gate(s, g, params);
    return {};
}

inline TruncationRecord apply_unitary(MpsState& s, const Gate& g, std::span<const double> params) {
    if (const auto* ry = std::get_if<RyGate>(&g.op)) {
        s.apply_ry(ry->target, bound_param(params, ry->param));
        return {};
    }
    if (const auto* cry = std::get_if<ControlledRyGate>(&g.op)) {
        return s.apply_controlled_ry(cry->control, cry->target, bound_param(params, cry->param));
    }
    if (const auto* cx = std::get_if<CnotGate>(&g.op)) {
        return s.apply_cnot(cx->control, cx->target);
    }
    if (const auto* x = std::get_if<PauliXGate>(&g.op)) {
        s.apply_x(x->target);
        return {};
    }
    if (std::holds_alternative<PresenceRyGate>(g.op)) {
        fail(ErrorCode::kUnsupported,
             "the MPS backend has no multi-controlled gates; use early_measured conditioning");
    }
    fail(ErrorCode::kInvalidArgument, "apply_unitary: not a unitary gate");
}

/// Runs unitaries and jumps from `pc` until a measurement, a reset, or the
/// end of the program. Returns the program counter where it stopped.
template <class State>
std::uint32_t advance(State& state, const Program& prog, std::uint32_t pc, std::span<const double> params,
                      std::span<const std::uint8_t> bits, TruncationLog* log) {
    const auto& code = prog.instructions();
    while (pc < code.size()) {
        const auto& ins = code[pc];
        switch (ins.kind) {
            case Program::Instruction::Kind::kUnitary: {
                const TruncationRecord r = apply_unitary(state, *ins.gate, params);
                if (log) {
                    log->record(pc, r);
                }
                ++pc;
                break;
            }
            case Program::Instruction::Kind::kJumpUnless:
                pc = ins.condition->evaluate(bits) ? pc + 1 : ins.jump_to;
                break;
            default:
                return pc;
        }
    }
    return pc;
}

template <class State>
void run_trajectory(State& state, const Program& prog, std::span<const double> params, std::span<std::uint8_t> bits,
                    Rng& rng, TruncationLog* log) {
    const auto& code = prog.instructions();
    std::uint32_t pc = prog.prefix_end();
    while (true) {
        pc = advance(state, prog, pc, params, bits, log);
        if (pc >= code.size()) {
            return;
        }
        const auto& ins = code[pc];
        const auto [w0, w1] = state.branch_weights(ins.qubit);
        const int bit = sample_branch(w0, w1, rng);
        state.project(ins.qubit, bit, bit ? w1 : w0);
        if (ins.kind == Program::Instruction::Kind::kMeasure) {
            bits[ins.slot] = static_cast<std::uint8_t>(bit);
        } else if (bit) {
            state.apply_x(ins.qubit);
        }
        ++pc;
    }
}

/// Samples `n_shots` trajectories. Shot s draws from substream (seed, s), so
/// the output does not depend on `threads`.
template <class State>
std::vector<std::uint8_t> sample_trajectories(const Program& prog, const State& prefix_state,
                                              std::span<const double> params, std::uint64_t n_shots,
                                              std::uint64_t seed, unsigned threads, TruncationLog* log) {
    const std::size_t width = prog.n_classical_slots();
    std::vector<std::uint8_t> out(n_shots * width, 0);
    const unsigned workers = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, n_shots)));
    std::vector<TruncationLog> logs(workers);
    if (log) {
        for (auto& l : logs) {
            l.resize(prog.instructions().size());
        }
    }
    auto work = [&](unsigned w) {
        const std::uint64_t begin = n_shots * w / workers;
        const std::uint64_t end = n_shots * (w + 1) / workers;
        TruncationLog* l = log ? &logs[w] : nullptr;
        for (std::uint64_t shot = begin; shot < end; ++shot) {
            State state = prefix_state;
            Rng rng(seed, shot);
            run_trajectory(state, prog, params, std::span(out).subspan(shot * width, width), rng, l);
            if (l) {
                ++l->shots;
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    work(w);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
        for (auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }
    if (log) {
        for (const auto& l : logs) {
            log->merge(l);
        }
    }
    return out;
}

template <class State>
class BranchEnumerator {
   public:
    BranchEnumerator(const Program& prog, std::span<const double> params, std::uint64_t leaf_cap)
        : prog_(prog), params_(params), leaf_cap_(leaf_cap) {}

    Distribution run(State state) {
        std::vector<std::uint8_t> bits(prog_.n_classical_slots(), 0);
        explore(std::move(state), prog_.prefix_end(), std::move(bits), 1.0);
        return std::move(dist_);
    }

   private:
    static constexpr double kPrune = 1e-15;

    void explore(State state, std::uint32_t pc, std::vector<std::uint8_t> bits, double weight) {
        pc = advance(state, prog_, pc, params_, bits, nullptr);
        if (pc >= prog_.instructions().size()) {
            if (++leaves_ > leaf_cap_) {
                fail(ErrorCode::kCapacity, "branch enumeration exceeded its cap of " + std::to_string(leaf_cap_) +
                                               " branches");
            }
            dist_[bits] += weight;
            return;
        }
        const auto& ins = prog_.instructions()[pc];
        const auto [w0, w1] = state.branch_weights(ins.qubit);
        const double total = w0 + w1;
        if (!(total >= kDegenerateBranchWeight)) {
            fail(ErrorCode::kNumerical, "branch enumeration reached a zero-norm state");
        }
        const double p1 = w1 / total;
        const double p0 = w0 / total;
        const bool take0 = p0 > kPrune;
        const bool take1 = p1 > kPrune;
        for (int bit = 0; bit < 2; ++bit) {
            if (!(bit ? take1 : take0)) {
                continue;
            }
            const bool last = bit == 1 || !take1;
            State child = last ? std::move(state) : state;
            child.project(ins.qubit, bit, bit ? w1 : w0);
            std::vector<std::uint8_t> child_bits = last ? std::move(bits) : bits;
            if (ins.kind == Program::Instruction::Kind::kMeasure) {
                child_bits[ins.slot] = static_cast<std::uint8_t>(bit);
            } else if (bit) {
                child.apply_x(ins.qubit);
            }
            explore(std::move(child), pc + 1, std::move(child_bits), weight * (bit ? p1 : p0));
        }
    }

    const Program& prog_;
    std::span<const double> params_;
    std::uint64_t leaf_cap_;
    std::uint64_t leaves_ = 0;
    Distribution dist_;
};

}  // namespace detail

}  // namespace sqmg
