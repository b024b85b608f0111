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

#include "sqmg/sim/simulate.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "sqmg/common/error.hpp"
#include "sqmg/sim/program.hpp"

namespace sqmg {

namespace {

void check_params(const Circuit& circuit, std::span<const double> params) {
    require(params.size() == circuit.n_params(), ErrorCode::kInvalidArgument,
            "expected " + std::to_string(circuit.n_params()) + " parameters, got " + std::to_string(params.size()));
    for (double p : params) {
        require(std::isfinite(p), ErrorCode::kInvalidArgument, "parameters must be finite");
    }
}

void check_branch_cap(const Circuit& circuit, std::uint64_t cap) {
    const std::uint64_t measures = circuit_stats(circuit).measure_count;
    require(measures < 63 && (std::uint64_t{1} << measures) <= cap, ErrorCode::kCapacity,
            "enumeration needs 2^" + std::to_string(measures) + " branches, above the cap of " +
                std::to_string(cap));
}

template <class State>
State run_prefix(State state, const Program& prog, std::span<const double> params, TruncationLog* log) {
    std::vector<std::uint8_t> no_bits(prog.n_classical_slots(), 0);
    for (std::uint32_t pc = 0; pc < prog.prefix_end(); ++pc) {
        const TruncationRecord r = detail::apply_unitary(state, *prog.instructions()[pc].gate, params);
        if (log) log->record(pc, r);
    }
    return state;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void check_dense_capacity(std::uint32_t n_qubits, const DenseOptions& options) {
    if (n_qubits > options.max_qubits) {
        const double gib = std::ldexp(16.0, static_cast<int>(n_qubits)) / std::ldexp(1.0, 30);
        std::ostringstream msg;
        msg << "dense state for " << n_qubits << " qubits needs 2^" << n_qubits << " amplitudes (" << gib
            << " GiB), above the cap of " << options.max_qubits << " qubits";
        fail(ErrorCode::kCapacity, msg.str());
    }
}

std::vector<std::uint8_t> sample_classical_bits(const Circuit& circuit, std::span<const double> params,
                                                std::uint64_t n_shots, std::uint64_t seed,
                                                const DenseOptions& options) {
    require(n_shots >= 1, ErrorCode::kInvalidArgument, "n_shots must be at least 1");
    check_params(circuit, params);
    check_dense_capacity(circuit.n_qubits(), options);
    const Program prog(circuit);
    const StateVector prefix = run_prefix(StateVector(circuit.n_qubits()), prog, params, nullptr);
    return detail::sample_trajectories(prog, prefix, params, n_shots, seed, options.threads, nullptr);
}

std::vector<std::uint8_t> sample_classical_bits_mps(const Circuit& circuit, std::span<const double> params,
                                                    std::uint64_t n_shots, std::uint64_t seed,
                                                    const MpsOptions& options, TruncationLog* log) {
    require(n_shots >= 1, ErrorCode::kInvalidArgument, "n_shots must be at least 1");
    check_params(circuit, params);
    const Program prog(circuit);
    TruncationLog prefix_log;
    if (log) {
        log->resize(prog.instructions().size());
        log->shots = 0;
        prefix_log.resize(prog.instructions().size());
    }
    const MpsState prefix =
        run_prefix(MpsState(circuit.n_qubits(), options.mps), prog, params, log ? &prefix_log : nullptr);
    auto bits = detail::sample_trajectories(prog, prefix, params, n_shots, seed, options.threads, log);
    if (log) {
        // The shared prefix is paid once but counts toward every shot.
        for (std::size_t i = 0; i < prog.prefix_end(); ++i) {
            log->discarded[i] += prefix_log.discarded[i] * static_cast<double>(n_shots);
            log->bond_dim[i] = std::max(log->bond_dim[i], prefix_log.bond_dim[i]);
        }
    }
    return bits;
}

SampleBatch run_shots(const Ansatz& ansatz, std::span<const double> params, std::uint64_t n_shots,
                      std::uint64_t seed, const DenseOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    auto bits = sample_classical_bits(ansatz.circuit, params, n_shots, seed, options);
    SampleBatch batch = batch_from_classical_bits(ansatz.n_atoms, bits, seed);
    batch.wall_time_s = seconds_since(t0);
    return batch;
}

MpsRun run_shots_mps(const Ansatz& ansatz, std::span<const double> params, std::uint64_t n_shots,
                     std::uint64_t seed, const MpsOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    MpsRun run;
    auto bits = sample_classical_bits_mps(ansatz.circuit, params, n_shots, seed, options, &run.log);
    run.batch = batch_from_classical_bits(ansatz.n_atoms, bits, seed);
    run.batch.wall_time_s = seconds_since(t0);
    return run;
}

Distribution enumerate_distribution(const Circuit& circuit, std::span<const double> params,
                                    const DenseOptions& options) {
    check_params(circuit, params);
    check_dense_capacity(circuit.n_qubits(), options);
    check_branch_cap(circuit, options.branch_cap);
    const Program prog(circuit);
    StateVector prefix = run_prefix(StateVector(circuit.n_qubits()), prog, params, nullptr);
    return detail::BranchEnumerator<StateVector>(prog, params, options.branch_cap).run(std::move(prefix));
}

Distribution enumerate_distribution_mps(const Circuit& circuit, std::span<const double> params,
                                        const MpsOptions& options) {
    check_params(circuit, params);
    check_branch_cap(circuit, options.branch_cap);
    const Program prog(circuit);
    MpsState prefix = run_prefix(MpsState(circuit.n_qubits(), options.mps), prog, params, nullptr);
    return detail::BranchEnumerator<MpsState>(prog, params, options.branch_cap).run(std::move(prefix));
}

Distribution record_distribution(const Distribution& slots, std::uint32_t n_atoms) {
    Distribution out;
    for (const auto& [bits, p] : slots) {
        SampleBatch b = batch_from_classical_bits(n_atoms, bits, 0);
        out[b.codes] += p;
    }
    return out;
}

Distribution empirical_distribution(const SampleBatch& batch) {
    Distribution out;
    const double w = batch.n_shots() ? 1.0 / static_cast<double>(batch.n_shots()) : 0.0;
    for (std::uint64_t s = 0; s < batch.n_shots(); ++s) {
        auto r = batch.record(s);
        out[std::vector<std::uint8_t>(r.begin(), r.end())] += w;
    }
    return out;
}

double total_variation(const Distribution& a, const Distribution& b) {
    double sum = 0.0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            sum += std::abs(ia->second);
            ++ia;
        } else if (ia == a.end() || ib->first < ia->first) {
            sum += std::abs(ib->second);
            ++ib;
        } else {
            sum += std::abs(ia->second - ib->second);
            ++ia;
            ++ib;
        }
    }
    return 0.5 * sum;
}

std::string truncation_log_csv(const TruncationLog& log) {
    std::ostringstream out;
    out.precision(17);
    out << "gate_index,discarded_weight,bond_dim\n";
    const double shots = log.shots ? static_cast<double>(log.shots) : 1.0;
    for (std::size_t i = 0; i < log.discarded.size(); ++i) {
        if (log.bond_dim[i] == 0) continue;
        out << i << ',' << log.discarded[i] / shots << ',' << log.bond_dim[i] << '\n';
    }
    return out.str();
}

}  // namespace sqmg
