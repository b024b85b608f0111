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
#include <array>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "sqmg/common/rng.hpp"
#include "sqmg/molgraph/molecule.hpp"

namespace sqmg::oracle {

struct Verdict {
    bool valid = false;
    bool empty = false;
    bool disconnected = false;
    std::vector<std::uint32_t> over_valence;  // compacted atom indices
    std::vector<AtomKind> atoms;
    std::vector<std::array<std::uint32_t, 3>> bonds;  // a, b, order
};

// Direct reading of a de novo record: code -> element table, bond order =
// bond code, a pair only counts when both sites are occupied.
inline Verdict judge_record(std::span<const std::uint8_t> rec, std::uint32_t n) {
    static constexpr AtomKind kTable[8] = {AtomKind::kNone, AtomKind::kC, AtomKind::kO, AtomKind::kN,
                                           AtomKind::kS,    AtomKind::kP, AtomKind::kF, AtomKind::kCl};
    static constexpr int kValence[8] = {0, 4, 2, 3, 6, 5, 1, 1};
    Verdict v;
    std::vector<int> index(n, -1);
    for (std::uint32_t i = 0; i < n; ++i) {
        if (rec[i] != 0) {
            index[i] = static_cast<int>(v.atoms.size());
            v.atoms.push_back(kTable[rec[i]]);
        }
    }
    std::vector<int> load(v.atoms.size(), 0);
    std::vector<std::uint32_t> parent(v.atoms.size());
    std::iota(parent.begin(), parent.end(), 0u);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::uint32_t p = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j, ++p) {
            const int order = rec[n + p];
            if (order == 0 || index[i] < 0 || index[j] < 0) continue;
            const auto a = static_cast<std::uint32_t>(index[i]), b = static_cast<std::uint32_t>(index[j]);
            v.bonds.push_back({a, b, static_cast<std::uint32_t>(order)});
            load[a] += order;
            load[b] += order;
            parent[find(a)] = find(b);
        }
    }
    v.empty = v.atoms.empty();
    for (std::uint32_t a = 0; a < v.atoms.size(); ++a) {
        if (load[a] > kValence[static_cast<int>(v.atoms[a])]) v.over_valence.push_back(a);
    }
    for (std::uint32_t a = 1; a < v.atoms.size(); ++a) v.disconnected |= find(a) != find(0);
    v.valid = !v.empty && v.over_valence.empty() && !v.disconnected;
    return v;
}

inline std::vector<std::vector<int>> order_matrix(const MoleculeGraph& g) {
    std::vector<std::vector<int>> m(g.size(), std::vector<int>(g.size(), 0));
    for (const Bond& b : g.bonds) m[b.a][b.b] = m[b.b][b.a] = b.order;
    return m;
}

// Exhaustive search over all vertex bijections.
inline bool isomorphic(const MoleculeGraph& x, const MoleculeGraph& y) {
    if (x.size() != y.size() || x.bonds.size() != y.bonds.size()) return false;
    auto sx = x.atoms, sy = y.atoms;
    std::sort(sx.begin(), sx.end());
    std::sort(sy.begin(), sy.end());
    if (sx != sy) return false;
    const auto mx = order_matrix(x), my = order_matrix(y);
    std::vector<std::uint32_t> perm(x.size());
    std::iota(perm.begin(), perm.end(), 0u);
    do {
        bool ok = true;
        for (std::size_t i = 0; i < perm.size() && ok; ++i) ok = x.atoms[i] == y.atoms[perm[i]];
        for (std::size_t i = 0; i < perm.size() && ok; ++i) {
            for (std::size_t j = i + 1; j < perm.size() && ok; ++j) ok = mx[i][j] == my[perm[i]][perm[j]];
        }
        if (ok) return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

inline MoleculeGraph permuted(const MoleculeGraph& g, const std::vector<std::uint32_t>& perm) {
    MoleculeGraph out;
    out.atoms.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out.atoms[perm[i]] = g.atoms[i];
    for (const Bond& b : g.bonds) out.bonds.push_back({perm[b.a], perm[b.b], b.order});
    return out;
}

inline std::vector<std::uint32_t> random_permutation(std::size_t n, Rng& rng) {
    std::vector<std::uint32_t> p(n);
    std::iota(p.begin(), p.end(), 0u);
    for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
    return p;
}

// Random labelled graph; `kinds` limits the element alphabet so that
// isomorphic pairs turn up often.
inline MoleculeGraph random_graph(Rng& rng, std::uint32_t n, double edge_prob, std::uint32_t kinds) {
    MoleculeGraph g;
    for (std::uint32_t i = 0; i < n; ++i) g.atoms.push_back(static_cast<AtomKind>(1 + rng.below(kinds)));
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j) {
            if (rng.uniform() < edge_prob) g.bonds.push_back({i, j, static_cast<int>(1 + rng.below(3))});
        }
    }
    return g;
}

}  // namespace sqmg::oracle
