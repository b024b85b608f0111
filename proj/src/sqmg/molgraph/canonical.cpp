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

// Canonical labelling by colour refinement plus individualization search.
// Each connected component is labelled on its own and the component keys
// are sorted, so repeated identical fragments never multiply the search.

#include <algorithm>
#include <numeric>
#include <optional>

#include "sqmg/molgraph/molecule.hpp"

namespace sqmg {

namespace {

using Coloring = std::vector<std::uint32_t>;

struct Component {
    std::vector<std::uint32_t> vertices;  // indices in the molecule
    std::vector<int> elem;
    std::vector<std::vector<int>> order;  // dense bond-order matrix
    std::vector<std::vector<std::uint32_t>> adj;

    std::size_t size() const { return vertices.size(); }
};

std::vector<Component> split_components(const MoleculeGraph& mol) {
    const auto adj = mol.adjacency();
    std::vector<int> comp(mol.size(), -1);
    std::vector<Component> out;
    for (std::uint32_t s = 0; s < mol.size(); ++s) {
        if (comp[s] >= 0) continue;
        Component c;
        std::vector<std::uint32_t> stack{s};
        comp[s] = static_cast<int>(out.size());
        while (!stack.empty()) {
            auto v = stack.back();
            stack.pop_back();
            c.vertices.push_back(v);
            for (auto [w, o] : adj[v]) {
                if (comp[w] < 0) {
                    comp[w] = static_cast<int>(out.size());
                    stack.push_back(w);
                }
            }
        }
        std::sort(c.vertices.begin(), c.vertices.end());
        const std::size_t n = c.size();
        std::vector<std::uint32_t> local(mol.size(), 0);
        for (std::uint32_t k = 0; k < n; ++k) local[c.vertices[k]] = k;
        c.elem.resize(n);
        c.order.assign(n, std::vector<int>(n, 0));
        c.adj.resize(n);
        for (std::uint32_t k = 0; k < n; ++k) {
            c.elem[k] = static_cast<int>(mol.atoms[c.vertices[k]]);
            for (auto [w, o] : adj[c.vertices[k]]) {
                c.order[k][local[w]] = o;
                c.adj[k].push_back(local[w]);
            }
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::size_t color_count(const Coloring& c) {
    return c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
}

/// Refines until the number of cells stops growing. Colours are dense ranks
/// ordered by (old colour, sorted neighbour multiset), so the result is
/// independent of vertex numbering.
Coloring refine(const Component& g, Coloring c) {
    const std::size_t n = g.size();
    using Signature = std::pair<std::uint32_t, std::vector<std::pair<std::uint32_t, int>>>;
    std::size_t cells = color_count(c);
    while (true) {
        std::vector<Signature> sig(n);
        for (std::size_t v = 0; v < n; ++v) {
            sig[v].first = c[v];
            for (auto w : g.adj[v]) sig[v].second.emplace_back(c[w], g.order[v][w]);
            std::sort(sig[v].second.begin(), sig[v].second.end());
        }
        std::vector<Signature> sorted = sig;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (std::size_t v = 0; v < n; ++v) {
            c[v] = static_cast<std::uint32_t>(std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin());
        }
        if (sorted.size() == cells) return c;
        cells = sorted.size();
    }
}

class Labeller {
   public:
    explicit Labeller(const Component& g) : g_(g) {}

    std::vector<std::uint32_t> run() {
        Coloring initial(g_.size());
        std::vector<int> kinds(g_.elem);
        std::sort(kinds.begin(), kinds.end());
        kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
        for (std::size_t v = 0; v < g_.size(); ++v) {
            initial[v] = static_cast<std::uint32_t>(std::lower_bound(kinds.begin(), kinds.end(), g_.elem[v]) - kinds.begin());
        }
        search(std::move(initial));
        return best_order_;
    }

   private:
    bool twins(std::uint32_t u, std::uint32_t v) const {
        for (std::size_t w = 0; w < g_.size(); ++w) {
            if (w != u && w != v && g_.order[u][w] != g_.order[v][w]) return false;
        }
        return true;
    }

    void search(Coloring c) {
        c = refine(g_, std::move(c));
        const std::size_t n = g_.size();
        const std::size_t cells = color_count(c);
        if (cells == n) {
            leaf(c);
            return;
        }
        std::vector<std::size_t> cell_size(cells, 0);
        for (auto x : c) ++cell_size[x];
        std::uint32_t target = 0;
        std::size_t best = n + 1;
        for (std::uint32_t x = 0; x < cells; ++x) {
            if (cell_size[x] > 1 && cell_size[x] < best) {
                best = cell_size[x];
                target = x;
            }
        }
        std::vector<std::uint32_t> tried;
        for (std::uint32_t v = 0; v < n; ++v) {
            if (c[v] != target) continue;
            if (std::any_of(tried.begin(), tried.end(), [&](std::uint32_t u) { return twins(u, v); })) continue;
            tried.push_back(v);
            Coloring next(n);
            for (std::size_t w = 0; w < n; ++w) next[w] = 2 * c[w] + 1;
            next[v] = 2 * c[v];
            search(std::move(next));
        }
    }

    void leaf(const Coloring& c) {
        const std::size_t n = g_.size();
        std::vector<std::uint32_t> order(n);
        for (std::uint32_t v = 0; v < n; ++v) order[c[v]] = v;
        std::vector<int> code;
        code.reserve(n + n * (n - 1) / 2);
        for (auto v : order) code.push_back(g_.elem[v]);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t s = r + 1; s < n; ++s) code.push_back(g_.order[order[r]][order[s]]);
        }
        if (!best_code_ || code < *best_code_) {
            best_code_ = std::move(code);
            best_order_ = std::move(order);
        }
    }

    const Component& g_;
    std::optional<std::vector<int>> best_code_;
    std::vector<std::uint32_t> best_order_;
};

std::string component_key(const Component& g, const std::vector<std::uint32_t>& order) {
    std::string key;
    for (std::size_t r = 0; r < order.size(); ++r) {
        if (r) key += ',';
        key += atom_symbol(static_cast<AtomKind>(g.elem[order[r]]));
    }
    key += ';';
    bool first = true;
    for (std::size_t r = 0; r < order.size(); ++r) {
        for (std::size_t s = r + 1; s < order.size(); ++s) {
            const int o = g.order[order[r]][order[s]];
            if (!o) continue;
            if (!first) key += ',';
            first = false;
            key += std::to_string(r) + '-' + std::to_string(s) + '=' + std::to_string(o);
        }
    }
    return key;
}

struct LabelledComponent {
    std::string key;
    std::vector<std::uint32_t> atoms;  // molecule indices in canonical order
};

std::vector<LabelledComponent> label(const MoleculeGraph& mol) {
    std::vector<LabelledComponent> out;
    for (const Component& c : split_components(mol)) {
        auto order = Labeller(c).run();
        LabelledComponent lc{component_key(c, order), {}};
        for (auto v : order) lc.atoms.push_back(c.vertices[v]);
        out.push_back(std::move(lc));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
    return out;
}

}  // namespace

std::string canonical_key(const MoleculeGraph& mol) {
    std::string key;
    for (const auto& c : label(mol)) {
        if (!key.empty()) key += '.';
        key += c.key;
    }
    return key;
}

std::vector<std::uint32_t> canonical_order(const MoleculeGraph& mol) {
    std::vector<std::uint32_t> order;
    for (const auto& c : label(mol)) order.insert(order.end(), c.atoms.begin(), c.atoms.end());
    return order;
}

}  // namespace sqmg
