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

#include "sqmg/sim/mps.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sqmg/common/error.hpp"
#include "sqmg/sim/measurement.hpp"

namespace sqmg {

namespace {

using Eigen::Index;
using Eigen::Matrix4cd;
using Eigen::MatrixXcd;

// Singular values this far below the largest are rank deficiency, not signal.
constexpr double kRankFloor = 1e-15;

Matrix4cd swap_gate() {
    Matrix4cd s = Matrix4cd::Zero();
    s(0, 0) = 1;
    s(1, 2) = 1;
    s(2, 1) = 1;
    s(3, 3) = 1;
    return s;
}

Matrix4cd controlled(const Eigen::Matrix2cd& u) {
    Matrix4cd m = Matrix4cd::Identity();
    m.block<2, 2>(2, 2) = u;
    return m;
}

Eigen::Matrix2cd ry(double theta) {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    Eigen::Matrix2cd m;
    m << c, -s, s, c;
    return m;
}

}  // namespace

MpsState::MpsState(std::uint32_t n_qubits, const MpsConfig& config) : config_(config) {
    require(n_qubits >= 1, ErrorCode::kInvalidArgument, "MPS needs at least one qubit");
    require(config.chi_max >= 1, ErrorCode::kInvalidArgument, "chi_max must be >= 1");
    require(config.threshold >= 0, ErrorCode::kInvalidArgument, "truncation threshold must be >= 0");
    sites_.resize(n_qubits);
    for (Site& s : sites_) {
        s.a[0] = MatrixXcd::Ones(1, 1);
        s.a[1] = MatrixXcd::Zero(1, 1);
    }
    logical_to_site_.resize(n_qubits);
    site_to_logical_.resize(n_qubits);
    for (std::uint32_t i = 0; i < n_qubits; ++i) {
        logical_to_site_[i] = i;
        site_to_logical_[i] = i;
    }
}

std::uint32_t MpsState::bond_dimension(std::uint32_t bond) const {
    return static_cast<std::uint32_t>(sites_.at(bond).a[0].cols());
}

std::uint32_t MpsState::max_bond_dimension() const {
    std::uint32_t best = 1;
    for (const Site& s : sites_) {
        best = std::max(best, static_cast<std::uint32_t>(s.a[0].cols()));
    }
    return best;
}

void MpsState::apply_single(Qubit q, const Eigen::Matrix2cd& u) {
    Site& s = sites_[site_of(q)];
    MatrixXcd n0 = u(0, 0) * s.a[0] + u(0, 1) * s.a[1];
    MatrixXcd n1 = u(1, 0) * s.a[0] + u(1, 1) * s.a[1];
    s.a[0] = std::move(n0);
    s.a[1] = std::move(n1);
}

void MpsState::apply_ry(Qubit q, double theta) { apply_single(q, ry(theta)); }

void MpsState::apply_x(Qubit q) {
    Site& s = sites_[site_of(q)];
    std::swap(s.a[0], s.a[1]);
}

TruncationRecord MpsState::apply_controlled_ry(Qubit control, Qubit target, double theta) {
    return apply_two(control, target, controlled(ry(theta)));
}

TruncationRecord MpsState::apply_cnot(Qubit control, Qubit target) {
    Eigen::Matrix2cd x;
    x << 0, 1, 1, 0;
    return apply_two(control, target, controlled(x));
}

TruncationRecord MpsState::apply_two(Qubit a, Qubit b, const Matrix4cd& u) {
    require(a != b, ErrorCode::kInvalidArgument, "two-qubit gate needs distinct qubits");
    require(a < n_qubits() && b < n_qubits(), ErrorCode::kInvalidArgument, "qubit index out of range");
    TruncationRecord total;
    auto absorb = [&](const TruncationRecord& r) {
        total.discarded_weight += r.discarded_weight;
        total.bond_dim = std::max(total.bond_dim, r.bond_dim);
    };

    const std::uint32_t home = site_of(a);
    const std::uint32_t sb = site_of(b);
    if (home < sb) {
        while (site_of(a) + 1 < sb) {
            swap_sites(site_of(a));
        }
    } else {
        while (site_of(a) > sb + 1) {
            swap_sites(site_of(a) - 1);
        }
    }

    const std::uint32_t sa = site_of(a);
    if (sa < sb) {
        absorb(apply_two_site(sa, u));
    } else {
        const Matrix4cd p = swap_gate();
        absorb(apply_two_site(sb, p * u * p));
    }

    while (site_of(a) < home) {
        swap_sites(site_of(a));
    }
    while (site_of(a) > home) {
        swap_sites(site_of(a) - 1);
    }
    return total;
}

void MpsState::swap_sites(std::uint32_t site) {
    apply_two_site(site, swap_gate());
    std::swap(site_to_logical_[site], site_to_logical_[site + 1]);
    logical_to_site_[site_to_logical_[site]] = site;
    logical_to_site_[site_to_logical_[site + 1]] = site + 1;
    ++swaps_;
}

TruncationRecord MpsState::apply_two_site(std::uint32_t site, const Matrix4cd& u) {
    require(site + 1 < n_qubits(), ErrorCode::kInvalidArgument, "two-site gate past the last site");
    move_center(site);
    Site& left = sites_[site];
    Site& right = sites_[site + 1];
    const Index dl = left.a[0].rows();
    const Index dr = right.a[0].cols();

    MatrixXcd theta[2][2];
    for (int s1 = 0; s1 < 2; ++s1) {
        for (int s2 = 0; s2 < 2; ++s2) {
            theta[s1][s2] = left.a[s1] * right.a[s2];
        }
    }
    MatrixXcd m(2 * dl, 2 * dr);
    for (int t1 = 0; t1 < 2; ++t1) {
        for (int t2 = 0; t2 < 2; ++t2) {
            auto block = m.block(t1 * dl, t2 * dr, dl, dr);
            block.setZero();
            for (int s1 = 0; s1 < 2; ++s1) {
                for (int s2 = 0; s2 < 2; ++s2) {
                    const auto coeff = u(2 * t1 + t2, 2 * s1 + s2);
                    if (coeff != 0.0) {
                        block += coeff * theta[s1][s2];
                    }
                }
            }
        }
    }

    Eigen::BDCSVD<MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (svd.info() != Eigen::Success || !sv.allFinite() || sv.size() == 0 || !(sv(0) > 0)) {
        fail(ErrorCode::kNumerical, "SVD failed on sites " + std::to_string(site) + "," + std::to_string(site + 1));
    }

    const double cutoff = std::max(config_.threshold, kRankFloor) * sv(0);
    Index keep = 0;
    while (keep < sv.size() && keep < static_cast<Index>(config_.chi_max) && sv(keep) > cutoff) {
        ++keep;
    }
    keep = std::max<Index>(keep, 1);
    check_memory(site, keep);

    const double total = sv.squaredNorm();
    const double kept = sv.head(keep).squaredNorm();
    TruncationRecord rec;
    rec.discarded_weight = std::max(0.0, (total - kept) / total);
    rec.bond_dim = static_cast<std::uint32_t>(keep);
    discarded_ += rec.discarded_weight;

    const MatrixXcd& uu = svd.matrixU();
    const Eigen::VectorXd s = sv.head(keep) / std::sqrt(kept);
    const MatrixXcd sv_h = s.asDiagonal() * svd.matrixV().leftCols(keep).adjoint();
    if (!uu.allFinite() || !sv_h.allFinite()) {
        fail(ErrorCode::kNumerical, "SVD produced non-finite factors on site " + std::to_string(site));
    }
    for (int t = 0; t < 2; ++t) {
        left.a[t] = uu.block(t * dl, 0, dl, keep);
        right.a[t] = sv_h.block(0, t * dr, keep, dr);
    }
    center_ = site + 1;
    return rec;
}

void MpsState::check_memory(std::uint32_t site, Index new_dim) const {
    double bytes = 0;
    for (std::uint32_t i = 0; i < sites_.size(); ++i) {
        const double rows = i == site + 1 ? static_cast<double>(new_dim) : static_cast<double>(sites_[i].a[0].rows());
        const double cols = i == site ? static_cast<double>(new_dim) : static_cast<double>(sites_[i].a[0].cols());
        bytes += 2 * rows * cols * sizeof(std::complex<double>);
    }
    if (bytes > config_.memory_budget_bytes) {
        const auto feasible = static_cast<std::uint64_t>(
            std::sqrt(config_.memory_budget_bytes / (2.0 * sizeof(std::complex<double>) * sites_.size())));
        fail(ErrorCode::kCapacity, "MPS bond dimension " + std::to_string(new_dim) + " exceeds the memory budget of " +
                                       std::to_string(static_cast<std::uint64_t>(config_.memory_budget_bytes)) +
                                       " bytes; max feasible chi is about " + std::to_string(feasible));
    }
}

void MpsState::move_center(std::uint32_t site) {
    require(site < n_qubits(), ErrorCode::kInvalidArgument, "site out of range");
    while (center_ < site) {
        move_center_right();
    }
    while (center_ > site) {
        move_center_left();
    }
}

void MpsState::move_center_right() {
    Site& cur = sites_[center_];
    Site& next = sites_[center_ + 1];
    const Index dl = cur.a[0].rows();
    const Index dr = cur.a[0].cols();
    MatrixXcd m(2 * dl, dr);
    m << cur.a[0], cur.a[1];
    Eigen::HouseholderQR<MatrixXcd> qr(m);
    const Index k = std::min(2 * dl, dr);
    const MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(2 * dl, k);
    const MatrixXcd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    cur.a[0] = q.topRows(dl);
    cur.a[1] = q.bottomRows(dl);
    next.a[0] = r * next.a[0];
    next.a[1] = r * next.a[1];
    ++center_;
}

void MpsState::move_center_left() {
    Site& cur = sites_[center_];
    Site& prev = sites_[center_ - 1];
    const Index dl = cur.a[0].rows();
    const Index dr = cur.a[0].cols();
    MatrixXcd m(dl, 2 * dr);
    m << cur.a[0], cur.a[1];
    const MatrixXcd mh = m.adjoint();
    Eigen::HouseholderQR<MatrixXcd> qr(mh);
    const Index k = std::min(2 * dr, dl);
    const MatrixXcd q = qr.householderQ() * MatrixXcd::Identity(2 * dr, k);
    const MatrixXcd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    const MatrixXcd qh = q.adjoint();
    cur.a[0] = qh.leftCols(dr);
    cur.a[1] = qh.rightCols(dr);
    const MatrixXcd rh = r.adjoint();
    prev.a[0] = prev.a[0] * rh;
    prev.a[1] = prev.a[1] * rh;
    --center_;
}

std::pair<double, double> MpsState::branch_weights(Qubit q) {
    move_center(site_of(q));
    const Site& s = sites_[center_];
    return {s.a[0].squaredNorm(), s.a[1].squaredNorm()};
}

void MpsState::project(Qubit q, int bit, double weight) {
    require(weight > 0, ErrorCode::kNumerical, "projection onto a zero-weight branch");
    move_center(site_of(q));
    Site& s = sites_[center_];
    s.a[1 - bit].setZero();
    s.a[bit] *= 1.0 / std::sqrt(weight);
}

double MpsState::norm_squared() const {
    MatrixXcd env = MatrixXcd::Ones(1, 1);
    for (const Site& s : sites_) {
        env = s.a[0].adjoint() * env * s.a[0] + s.a[1].adjoint() * env * s.a[1];
    }
    return env(0, 0).real();
}

Eigen::VectorXcd MpsState::to_dense() const {
    const auto n = n_qubits();
    require(n <= 24, ErrorCode::kCapacity, "to_dense: too many qubits");
    // rows: basis index over the sites processed so far (site k = bit k)
    MatrixXcd psi = MatrixXcd::Ones(1, 1);
    for (std::uint32_t k = 0; k < n; ++k) {
        const Site& s = sites_[k];
        const Index rows = psi.rows();
        MatrixXcd next(2 * rows, s.a[0].cols());
        next.topRows(rows) = psi * s.a[0];
        next.bottomRows(rows) = psi * s.a[1];
        psi = std::move(next);
    }
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(Index{1} << n);
    for (Index idx = 0; idx < psi.rows(); ++idx) {
        Index logical = 0;
        for (std::uint32_t k = 0; k < n; ++k) {
            if ((idx >> k) & 1) {
                logical |= Index{1} << site_to_logical_[k];
            }
        }
        out(logical) = psi(idx, 0);
    }
    return out;
}

int measure_site(MpsState& state, Qubit q, Rng& rng) {
    const auto [w0, w1] = state.branch_weights(q);
    const int bit = sample_branch(w0, w1, rng);
    state.project(q, bit, bit ? w1 : w0);
    return bit;
}

void reset_site(MpsState& state, Qubit q, Rng& rng) {
    if (measure_site(state, q, rng)) {
        state.apply_x(q);
    }
}

}  // namespace sqmg
