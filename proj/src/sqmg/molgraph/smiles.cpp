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

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

#include "sqmg/common/error.hpp"
#include "sqmg/molgraph/molecule.hpp"

namespace sqmg {

namespace {

constexpr int kMaxRingLabel = 99;

std::string_view bond_symbol(int order) {
    switch (order) {
        case 2:
            return "=";
        case 3:
            return "#";
        default:
            return "";
    }
}

std::string ring_label(int d) { return d < 10 ? std::to_string(d) : "%" + std::to_string(d); }

class SmilesWriter {
   public:
    explicit SmilesWriter(const MoleculeGraph& mol) : mol_(mol), adj_(mol.adjacency()) {
        const auto order = canonical_order(mol);
        rank_.resize(mol.size());
        for (std::uint32_t r = 0; r < order.size(); ++r) rank_[order[r]] = r;
        for (auto& nbrs : adj_) {
            std::sort(nbrs.begin(), nbrs.end(), [&](auto x, auto y) { return rank_[x.first] < rank_[y.first]; });
        }
        starts_ = order;
    }

    std::optional<std::string> write() {
        visited_.assign(mol_.size(), 0);
        children_.assign(mol_.size(), {});
        rings_.assign(mol_.size(), {});
        std::vector<std::uint32_t> roots;
        for (auto s : starts_) {
            if (!visited_[s]) {
                roots.push_back(s);
                plan(s, s);
            }
        }
        std::string out;
        for (auto r : roots) {
            if (!out.empty()) out += '.';
            if (!emit(r, out)) return std::nullopt;
        }
        return out;
    }

   private:
    struct RingEnd {
        std::uint32_t other;
        int order;
    };

    void plan(std::uint32_t v, std::uint32_t parent) {
        visited_[v] = 1;
        for (auto [w, order] : adj_[v]) {
            if (w == parent && v != parent) continue;
            if (visited_[w]) {
                if (ring_edges_.insert(std::minmax(v, w)).second) {
                    rings_[w].push_back({v, order});
                    rings_[v].push_back({w, order});
                }
            } else {
                children_[v].push_back({w, order});
                plan(w, v);
            }
        }
    }

    bool emit(std::uint32_t v, std::string& out) {
        out += atom_symbol(mol_.atoms[v]);
        std::vector<int> release;
        for (const RingEnd& r : rings_[v]) {
            auto key = std::minmax(v, r.other);
            if (auto it = open_.find(key); it != open_.end()) {
                out += ring_label(it->second);
                release.push_back(it->second);
                open_.erase(it);
            } else {
                int d = 1;
                while (in_use_.count(d)) ++d;
                if (d > kMaxRingLabel) return false;
                in_use_.insert(d);
                open_[key] = d;
                out += bond_symbol(r.order);
                out += ring_label(d);
            }
        }
        for (int d : release) in_use_.erase(d);
        const auto& kids = children_[v];
        for (std::size_t k = 0; k < kids.size(); ++k) {
            const bool branch = k + 1 < kids.size();
            if (branch) out += '(';
            out += bond_symbol(kids[k].second);
            if (!emit(kids[k].first, out)) return false;
            if (branch) out += ')';
        }
        return true;
    }

    const MoleculeGraph& mol_;
    std::vector<std::vector<std::pair<std::uint32_t, int>>> adj_;
    std::vector<std::uint32_t> rank_;
    std::vector<std::uint32_t> starts_;
    std::vector<char> visited_;
    std::vector<std::vector<std::pair<std::uint32_t, int>>> children_;
    std::vector<std::vector<RingEnd>> rings_;
    std::set<std::pair<std::uint32_t, std::uint32_t>> ring_edges_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> open_;
    std::set<int> in_use_;
};

}  // namespace

SmilesText to_smiles(const MoleculeGraph& mol) {
    if (mol.empty()) return {"", false};
    if (auto text = SmilesWriter(mol).write()) return {*text, false};
    return {canonical_key(mol), true};
}

MoleculeGraph parse_smiles(std::string_view s) {
    MoleculeGraph mol;
    std::vector<int> branch_stack;
    std::map<int, std::pair<std::uint32_t, int>> open_rings;
    std::set<std::pair<std::uint32_t, std::uint32_t>> bonded;
    int prev = -1;
    int pending = 0;
    std::size_t i = 0;
    auto bad = [&](const std::string& what) {
        fail(ErrorCode::kFormat, "SMILES '" + std::string(s) + "' at " + std::to_string(i) + ": " + what);
    };
    auto add_bond = [&](std::uint32_t a, std::uint32_t b, int order) {
        if (a == b || !bonded.insert(std::minmax(a, b)).second) bad("duplicate or self bond");
        mol.bonds.push_back({a, b, order});
    };
    auto add_atom = [&](AtomKind kind) {
        const auto idx = static_cast<std::uint32_t>(mol.atoms.size());
        mol.atoms.push_back(kind);
        if (prev >= 0) add_bond(static_cast<std::uint32_t>(prev), idx, pending ? pending : 1);
        pending = 0;
        prev = static_cast<int>(idx);
    };
    auto ring = [&](int label) {
        if (prev < 0) bad("ring bond without an atom");
        auto it = open_rings.find(label);
        if (it == open_rings.end()) {
            open_rings[label] = {static_cast<std::uint32_t>(prev), pending};
        } else {
            const int a = it->second.second;
            if (a && pending && a != pending) bad("conflicting ring bond orders");
            add_bond(it->second.first, static_cast<std::uint32_t>(prev), a ? a : (pending ? pending : 1));
            open_rings.erase(it);
        }
        pending = 0;
    };
    while (i < s.size()) {
        const char c = s[i];
        if (c == 'C' && i + 1 < s.size() && s[i + 1] == 'l') {
            add_atom(AtomKind::kCl);
            i += 2;
        } else if (std::string_view("CNOSPF").find(c) != std::string_view::npos) {
            add_atom(parse_atom_symbol(std::string_view(&s[i], 1)));
            ++i;
        } else if (c == '[') {
            const auto close = s.find(']', i);
            if (close == std::string_view::npos) bad("unterminated bracket atom");
            const std::string_view sym = s.substr(i + 1, close - i - 1);
            if (sym == "NONE") bad("unsupported bracket atom");
            try {
                add_atom(parse_atom_symbol(sym));
            } catch (const Error&) {
                bad("unsupported bracket atom");
            }
            i = close + 1;
        } else if (c == '-' || c == '=' || c == '#') {
            if (pending) bad("two bond symbols in a row");
            pending = c == '-' ? 1 : c == '=' ? 2 : 3;
            ++i;
        } else if (c == '(') {
            if (prev < 0) bad("branch without an atom");
            branch_stack.push_back(prev);
            ++i;
        } else if (c == ')') {
            if (branch_stack.empty() || pending) bad("unbalanced branch");
            prev = branch_stack.back();
            branch_stack.pop_back();
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            ring(c - '0');
            ++i;
        } else if (c == '%') {
            if (i + 2 >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i + 1])) ||
                !std::isdigit(static_cast<unsigned char>(s[i + 2]))) {
                bad("bad %nn ring label");
            }
            ring((s[i + 1] - '0') * 10 + (s[i + 2] - '0'));
            i += 3;
        } else if (c == '.') {
            if (pending || !branch_stack.empty()) bad("misplaced '.'");
            prev = -1;
            ++i;
        } else {
            bad(std::string("unsupported character '") + c + "'");
        }
    }
    if (pending) bad("dangling bond symbol");
    if (!branch_stack.empty()) bad("unclosed branch");
    if (!open_rings.empty()) bad("unclosed ring bond");
    return mol;
}

}  // namespace sqmg
