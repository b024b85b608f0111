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

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sqmg/circuit/circuit.hpp"
#include "sqmg/common/rng.hpp"

namespace sqmg {

struct MpsConfig {
    /// Bond-dimension cap. 1 << 16 together with threshold 0 is "exact mode".
    std::uint32_t chi_max = 64;
    /// Singular values below threshold * largest are discarded.
    double threshold = 1e-12;
    /// Hard limit on tensor storage; exceeding it is a capacity error.
    double memory_budget_bytes = 2.0 * 1024 * 1024 * 1024;

    static MpsConfig exact() { return {1u << 16, 0.0, 2.0 * 1024 * 1024 * 1024}; }
};

/// Outcome of one two-site update.
struct TruncationRecord {
    double discarded_weight = 0;
    std::uint32_t bond_dim = 1;
};

/// Matrix product state over qubits with a tracked orthogonality center.
///
/// Each site holds two matrices A[0], A[1] of shape (left bond x right bond),
/// one per physical value. Sites to the left of the center are left-isometric
/// and sites to the right are right-isometric, so single-site probabilities
/// are local to the center tensor. Callers address logical qubits; the
/// logical-to-site permutation changes only transiently while a long-range
/// gate is routed through swaps.
class MpsState {
   public:
    MpsState(std::uint32_t n_qubits, const MpsConfig& config);

    std::uint32_t n_qubits() const noexcept { return static_cast<std::uint32_t>(sites_.size()); }
    std::uint32_t center() const noexcept { return center_; }
    const MpsConfig& config() const noexcept { return config_; }

    /// Bond b joins sites b and b + 1.
    std::uint32_t bond_dimension(std::uint32_t bond) const;
    std::uint32_t max_bond_dimension() const;
    std::uint32_t site_of(Qubit q) const { return logical_to_site_.at(q); }
    Qubit qubit_at(std::uint32_t site) const { return site_to_logical_.at(site); }
    std::uint64_t swap_count() const noexcept { return swaps_; }

    void apply_single(Qubit q, const Eigen::Matrix2cd& u);
    /// `u` acts on |a b> with `a` as the high bit of the 4-dim index.
    /// Non-adjacent pairs are routed with 2(d - 1) swaps; the permutation is
    /// restored before returning.
    TruncationRecord apply_two(Qubit a, Qubit b, const Eigen::Matrix4cd& u);
    /// Contract sites (site, site + 1), apply `u` (site as high bit), split by
    /// SVD, truncate and renormalize. Leaves the center at site + 1.
    TruncationRecord apply_two_site(std::uint32_t site, const Eigen::Matrix4cd& u);

    void apply_ry(Qubit q, double theta);
    void apply_x(Qubit q);
    TruncationRecord apply_controlled_ry(Qubit control, Qubit target, double theta);
    TruncationRecord apply_cnot(Qubit control, Qubit target);

    /// Moves the center to the qubit's site and returns the branch weights.
    std::pair<double, double> branch_weights(Qubit q);
    void project(Qubit q, int bit, double weight);

    void move_center(std::uint32_t site);
    double norm_squared() const;

    /// Dense amplitudes in the StateVector convention (qubit q = bit q).
    /// Intended for small systems in tests.
    Eigen::VectorXcd to_dense() const;

    /// Accumulated truncation since construction.
    double discarded_weight() const noexcept { return discarded_; }

   private:
    struct Site {
        Eigen::MatrixXcd a[2];
    };

    void move_center_right();
    void move_center_left();
    void swap_sites(std::uint32_t site);
    void check_memory(std::uint32_t site, Eigen::Index new_dim) const;

    MpsConfig config_;
    std::vector<Site> sites_;
    std::vector<std::uint32_t> logical_to_site_;
    std::vector<Qubit> site_to_logical_;
    std::uint32_t center_ = 0;
    std::uint64_t swaps_ = 0;
    double discarded_ = 0;
};

/// Samples, collapses and renormalizes one qubit.
int measure_site(MpsState& state, Qubit q, Rng& rng);
/// Measure, then X when the outcome was 1.
void reset_site(MpsState& state, Qubit q, Rng& rng);

}  // namespace sqmg
