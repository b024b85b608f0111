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
#include <span>
#include <string>
#include <vector>

#include "sqmg/ansatz/ansatz.hpp"
#include "sqmg/circuit/circuit.hpp"
#include "sqmg/sim/executor.hpp"
#include "sqmg/sim/mps.hpp"
#include "sqmg/sim/sample_batch.hpp"

namespace sqmg {

struct DenseOptions {
    std::uint32_t max_qubits = 30;
    unsigned threads = 1;
    std::uint64_t branch_cap = std::uint64_t{1} << 20;
};

struct MpsOptions {
    MpsConfig mps;
    unsigned threads = 1;
    std::uint64_t branch_cap = std::uint64_t{1} << 20;
};

/// Throws kCapacity when the dense state for `n_qubits` exceeds the cap.
void check_dense_capacity(std::uint32_t n_qubits, const DenseOptions& options);

/// Raw per-shot classical slots, shots * n_classical_slots bytes.
std::vector<std::uint8_t> sample_classical_bits(const Circuit& circuit, std::span<const double> params,
                                                std::uint64_t n_shots, std::uint64_t seed,
                                                const DenseOptions& options = {});
std::vector<std::uint8_t> sample_classical_bits_mps(const Circuit& circuit, std::span<const double> params,
                                                    std::uint64_t n_shots, std::uint64_t seed,
                                                    const MpsOptions& options = {}, TruncationLog* log = nullptr);

SampleBatch run_shots(const Ansatz& ansatz, std::span<const double> params, std::uint64_t n_shots,
                      std::uint64_t seed, const DenseOptions& options = {});

struct MpsRun {
    SampleBatch batch;
    TruncationLog log;
};

MpsRun run_shots_mps(const Ansatz& ansatz, std::span<const double> params, std::uint64_t n_shots,
                     std::uint64_t seed, const MpsOptions& options = {});

/// Exact joint distribution over classical slots by depth-first branch
/// enumeration. Throws kCapacity when 2^measure_count exceeds the cap.
Distribution enumerate_distribution(const Circuit& circuit, std::span<const double> params,
                                    const DenseOptions& options = {});
Distribution enumerate_distribution_mps(const Circuit& circuit, std::span<const double> params,
                                        const MpsOptions& options = {});

/// Re-keys a classical-slot distribution by SampleBatch records.
Distribution record_distribution(const Distribution& slots, std::uint32_t n_atoms);
/// Empirical record distribution of a batch.
Distribution empirical_distribution(const SampleBatch& batch);
double total_variation(const Distribution& a, const Distribution& b);

/// CSV with columns gate_index, discarded_weight, bond_dim; one row per
/// two-qubit instruction. Discarded weight is the per-shot mean.
std::string truncation_log_csv(const TruncationLog& log);

}  // namespace sqmg
