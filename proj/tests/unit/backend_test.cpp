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


#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>
#include <doctest.h>

#include "sqmg/circuit/circuit.hpp"
#include "sqmg/common/error.hpp"
#include "sqmg/common/rng.hpp"
#include "sqmg/sim/mps.hpp"
#include "sqmg/sim/statevector.hpp"

using namespace sqmg;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

namespace {

// Full-operator oracle: qubit q is bit q, so it sits at kron position n-1-q.
Mat embed(const std::vector<std::pair<Qubit, Mat>>& factors, std::uint32_t n) {
    Mat out = Mat::Identity(1, 1);
    for (int q = static_cast<int>(n) - 1; q >= 0; --q) {
        Mat f = Mat::Identity(2, 2);
        for (const auto& [k, m] : factors) {
            if (k == static_cast<Qubit>(q)) f = m;
        }
        Mat next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
            for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * f;
        }
        out = next;
    }
    return out;
}

Mat ry(double t) {
    Mat m(2, 2);
    m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
    return m;
}

Mat pauli_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Mat projector(int b) {
    Mat m = Mat::Zero(2, 2);
    m(b, b) = 1;
    return m;
}

Mat controlled(Qubit c, Qubit t, const Mat& u, std::uint32_t n) {
    return embed({{c, projector(0)}}, n) + embed({{c, projector(1)}, {t, u}}, n);
}

struct RandomCircuit {
    std::uint32_t n;
    std::vector<Gate> gates;
    std::vector<double> params;
};

RandomCircuit random_circuit(std::uint32_t n, int depth, std::uint64_t seed) {
    Rng rng(seed);
    RandomCircuit rc{n, {}, {}};
    for (int d = 0; d < depth; ++d) {
        const auto kind = rng.below(4);
        const Qubit a = static_cast<Qubit>(rng.below(n));
        Qubit b = static_cast<Qubit>(rng.below(n - 1));
        if (b >= a) ++b;
        if (kind == 0) {
            rc.gates.push_back(RyGate{a, static_cast<ParamSlot>(rc.params.size())});
            rc.params.push_back(2 * std::numbers::pi * rng.uniform());
        } else if (kind == 1) {
            rc.gates.push_back(ControlledRyGate{a, b, static_cast<ParamSlot>(rc.params.size())});
            rc.params.push_back(2 * std::numbers::pi * rng.uniform());
        } else if (kind == 2) {
            rc.gates.push_back(CnotGate{a, b});
        } else {
            rc.gates.push_back(PauliXGate{a});
        }
    }
    return rc;
}

Vec oracle_state(const RandomCircuit& rc) {
    Vec psi = Vec::Zero(Eigen::Index{1} << rc.n);
    psi(0) = 1;
    for (const Gate& g : rc.gates) {
        Mat op;
        if (const auto* r = std::get_if<RyGate>(&g.op)) op = embed({{r->target, ry(rc.params[r->param])}}, rc.n);
        if (const auto* r = std::get_if<ControlledRyGate>(&g.op)) {
            op = controlled(r->control, r->target, ry(rc.params[r->param]), rc.n);
        }
        if (const auto* r = std::get_if<CnotGate>(&g.op)) op = controlled(r->control, r->target, pauli_x(), rc.n);
        if (const auto* r = std::get_if<PauliXGate>(&g.op)) op = embed({{r->target, pauli_x()}}, rc.n);
        psi = op * psi;
    }
    return psi;
}

Vec dense_of(const StateVector& s) {
    Vec v(static_cast<Eigen::Index>(s.amplitudes().size()));
    for (std::size_t i = 0; i < s.amplitudes().size(); ++i) v(static_cast<Eigen::Index>(i)) = s.amplitudes()[i];
    return v;
}

void run_on(MpsState& m, const RandomCircuit& rc) {
    for (const Gate& g : rc.gates) {
        if (const auto* r = std::get_if<RyGate>(&g.op)) m.apply_ry(r->target, rc.params[r->param]);
        if (const auto* r = std::get_if<ControlledRyGate>(&g.op)) {
            m.apply_controlled_ry(r->control, r->target, rc.params[r->param]);
        }
        if (const auto* r = std::get_if<CnotGate>(&g.op)) m.apply_cnot(r->control, r->target);
        if (const auto* r = std::get_if<PauliXGate>(&g.op)) m.apply_x(r->target);
    }
}

double fidelity(const Vec& a, const Vec& b) { return std::norm(a.dot(b)); }

// Marginal over every qubit but `q`, after an exact reset of `q`.
template <class State>
std::vector<double> marginal_after_reset(const State& s, Qubit q, std::uint32_t n, auto to_vec) {
    std::vector<double> out(std::size_t{1} << n, 0.0);
    for (int b = 0; b < 2; ++b) {
        State c = s;
        const auto [w0, w1] = c.branch_weights(q);
        const double w = b ? w1 : w0;
        if (w < 1e-15) continue;
        c.project(q, b, w);
        if (b) c.apply_x(q);
        const Vec v = to_vec(c);
        for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i) & ~(std::size_t{1} << q)] += w * std::norm(v(i));
    }
    return out;
}

std::vector<double> marginal(const Vec& v, Qubit q) {
    std::vector<double> out(static_cast<std::size_t>(v.size()), 0.0);
    for (Eigen::Index i = 0; i < v.size(); ++i) out[static_cast<std::size_t>(i) & ~(std::size_t{1} << q)] += std::norm(v(i));
    return out;
}

}  // namespace

TEST_CASE("statevector: Ry(pi/2)|0>") {
    StateVector s(1);
    s.apply_ry(0, std::numbers::pi / 2);
    CHECK(s.amplitudes()[0].real() == doctest::Approx(0.7071067811865476).epsilon(1e-15));
    CHECK(s.amplitudes()[1].real() == doctest::Approx(0.7071067811865476).epsilon(1e-15));
    const auto [w0, w1] = s.branch_weights(0);
    CHECK(w0 == doctest::Approx(0.5));
    CHECK(w1 == doctest::Approx(0.5));
}

TEST_CASE("statevector matches full-operator oracle") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const std::uint32_t n = 2 + static_cast<std::uint32_t>(seed % 4);
        const auto rc = random_circuit(n, 30, seed);
        StateVector s(n);
        for (const Gate& g : rc.gates) apply_gate(s, g, rc.params);
        const Vec want = oracle_state(rc);
        CHECK((dense_of(s) - want).norm() < 1e-12);
        CHECK(s.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("statevector presence Ry fires only on non-zero registers") {
    // Registers {0} and {1, 2}; target 3.
    for (std::uint32_t basis = 0; basis < 8; ++basis) {
        StateVector s(4);
        for (Qubit q = 0; q < 3; ++q) {
            if (basis >> q & 1) s.apply_x(q);
        }
        s.apply_presence_ry({{0}, {1, 2}}, 3, std::numbers::pi);
        const bool fire = (basis & 1) && (basis & 6);
        const auto [w0, w1] = s.branch_weights(3);
        CHECK(w1 == doctest::Approx(fire ? 1.0 : 0.0));
        CHECK(w0 + w1 == doctest::Approx(1.0));
    }
}

TEST_CASE("statevector: reset of a Bell qubit leaves the partner uniform") {
    StateVector s(2);
    s.apply_ry(0, std::numbers::pi / 2);
    s.apply_cnot(0, 1);
    Rng rng(7);
    int ones = 0;
    for (int t = 0; t < 2; ++t) {
        StateVector c = s;
        const auto [w0, w1] = c.branch_weights(0);
        CHECK(w0 == doctest::Approx(0.5));
        c.project(0, t, t ? w1 : w0);
        if (t) c.apply_x(0);
        const auto [p0, p1] = c.branch_weights(1);
        ones += p1 > 0.5;
        CHECK(c.branch_weights(0).first == doctest::Approx(1.0));
    }
    CHECK(ones == 1);
    StateVector r = s;
    reset_qubit(r, 0, rng);
    CHECK(r.branch_weights(0).first == doctest::Approx(1.0));
}

TEST_CASE("statevector apply_gate rejects bad slots and non-unitary gates") {
    StateVector s(2);
    const std::vector<double> p{0.3};
    CHECK_THROWS_AS(apply_gate(s, RyGate{0, 3}, p), Error);
    CHECK_THROWS_AS(apply_gate(s, MeasureGate{0, 0}, p), Error);
    CHECK_THROWS_AS(apply_gate(s, RyGate{0, 0}, std::vector<double>{NAN}), Error);
}

TEST_CASE("mps: Bell pair Schmidt spectrum") {
    MpsState m(2, MpsConfig{});
    m.apply_ry(0, std::numbers::pi / 2);
    const auto rec = m.apply_cnot(0, 1);
    CHECK(rec.bond_dim == 2);
    CHECK(rec.discarded_weight < 1e-15);
    CHECK(m.bond_dimension(0) == 2);
    const Vec v = m.to_dense();
    CHECK(std::abs(v(0)) == doctest::Approx(0.7071067811865476));
    CHECK(std::abs(v(3)) == doctest::Approx(0.7071067811865476));
}

TEST_CASE("mps matches the statevector, including long-range gates") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const std::uint32_t n = 3 + static_cast<std::uint32_t>(seed % 4);
        const auto rc = random_circuit(n, 40, 100 + seed);
        StateVector s(n);
        for (const Gate& g : rc.gates) apply_gate(s, g, rc.params);
        MpsState m(n, MpsConfig::exact());
        run_on(m, rc);
        CHECK(fidelity(m.to_dense(), dense_of(s)) > 1 - 1e-10);
        CHECK(m.norm_squared() == doctest::Approx(1.0).epsilon(1e-10));
        for (Qubit q = 0; q < n; ++q) CHECK(m.site_of(q) == q);
    }
}

TEST_CASE("mps long-range CNOT on 6 qubits") {
    MpsState m(6, MpsConfig::exact());
    StateVector s(6);
    for (Qubit q = 0; q < 6; ++q) {
        m.apply_ry(q, 0.3 + 0.2 * q);
        s.apply_ry(q, 0.3 + 0.2 * q);
    }
    m.apply_cnot(0, 5);
    s.apply_cnot(0, 5);
    m.apply_cnot(4, 1);
    s.apply_cnot(4, 1);
    CHECK(fidelity(m.to_dense(), dense_of(s)) > 1 - 1e-10);
    CHECK(m.swap_count() > 0);
}

TEST_CASE("mps truncation with chi=1 discards weight and stays normalized") {
    MpsState m(2, MpsConfig{1, 0.0, 1e9});
    m.apply_ry(0, std::numbers::pi / 2);
    const auto rec = m.apply_cnot(0, 1);
    CHECK(rec.bond_dim == 1);
    CHECK(rec.discarded_weight == doctest::Approx(0.5));
    CHECK(m.norm_squared() == doctest::Approx(1.0));
    CHECK(m.discarded_weight() == doctest::Approx(0.5));
}

TEST_CASE("mps memory budget is a capacity error") {
    MpsState m(8, MpsConfig{1u << 16, 0.0, 64.0});
    for (Qubit q = 0; q < 8; ++q) m.apply_ry(q, 1.0);
    bool thrown = false;
    try {
        for (Qubit q = 0; q + 1 < 8; ++q) m.apply_cnot(q, q + 1);
        for (Qubit q = 0; q < 8; ++q) m.apply_ry(q, 0.7);
        for (Qubit q = 0; q + 2 < 8; ++q) m.apply_cnot(q, q + 2);
    } catch (const Error& e) {
        thrown = e.code() == ErrorCode::kCapacity;
    }
    CHECK(thrown);
}

TEST_CASE("mps: Bell measurements are perfectly correlated") {
    Rng rng(11);
    int agree = 0, ones = 0;
    for (int shot = 0; shot < 10000; ++shot) {
        MpsState m(2, MpsConfig{});
        m.apply_ry(0, std::numbers::pi / 2);
        m.apply_cnot(0, 1);
        const int a = measure_site(m, 0, rng);
        const int b = measure_site(m, 1, rng);
        agree += a == b;
        ones += a;
    }
    CHECK(agree == 10000);
    CHECK(ones > 4800);
    CHECK(ones < 5200);
}

TEST_CASE("mps reset preserves the other qubits' marginal exactly") {
    const auto rc = random_circuit(4, 30, 999);
    StateVector s(4);
    for (const Gate& g : rc.gates) apply_gate(s, g, rc.params);
    MpsState m(4, MpsConfig::exact());
    run_on(m, rc);
    for (Qubit q = 0; q < 4; ++q) {
        const auto before = marginal(dense_of(s), q);
        const auto dense_after = marginal_after_reset(s, q, 4, [](const StateVector& x) { return dense_of(x); });
        const auto mps_after = marginal_after_reset(m, q, 4, [](const MpsState& x) { return x.to_dense(); });
        for (std::size_t i = 0; i < before.size(); ++i) {
            CHECK(dense_after[i] == doctest::Approx(before[i]).epsilon(1e-12));
            CHECK(mps_after[i] == doctest::Approx(before[i]).epsilon(1e-10));
        }
    }
}
