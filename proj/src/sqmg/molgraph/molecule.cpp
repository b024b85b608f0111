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

#include "sqmg/molgraph/molecule.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "sqmg/common/error.hpp"
#include "sqmg/common/io.hpp"

namespace sqmg {

void MoleculeGraph::check() const {
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    for (AtomKind a : atoms) {
        require(a != AtomKind::kNone, ErrorCode::kInvalidArgument, "molecule contains a NONE atom");
    }
    for (const Bond& b : bonds) {
        require(b.a < atoms.size() && b.b < atoms.size(), ErrorCode::kInvalidArgument, "bond index out of range");
        require(b.a != b.b, ErrorCode::kInvalidArgument, "self bond");
        require(b.order >= 1 && b.order <= 3, ErrorCode::kInvalidArgument, "bond order outside 1..3");
        require(seen.insert(std::minmax(b.a, b.b)).second, ErrorCode::kInvalidArgument, "duplicate bond");
    }
}

std::vector<std::vector<std::pair<std::uint32_t, int>>> MoleculeGraph::adjacency() const {
    std::vector<std::vector<std::pair<std::uint32_t, int>>> adj(atoms.size());
    for (const Bond& b : bonds) {
        adj[b.a].emplace_back(b.b, b.order);
        adj[b.b].emplace_back(b.a, b.order);
    }
    return adj;
}

void ValenceTable::check() const {
    for (AtomKind k : kElements) {
        require(of(k) > 0, ErrorCode::kConfig,
                "valence for " + std::string(atom_symbol(k)) + " must be positive");
    }
}

std::string failure_text(const Failure& f) {
    switch (f.kind) {
        case FailureKind::kEmptyMolecule:
            return "empty";
        case FailureKind::kValenceExceeded:
            return "valence_exceeded:" + std::to_string(f.atom);
        case FailureKind::kDisconnected:
            return "disconnected";
    }
    return "unknown";
}

MoleculeGraph decode_shot(std::span<const std::uint8_t> record, std::uint32_t n_atoms, const AtomCodebook& atoms,
                          const BondCodebook& bonds, const ModeSpec& mode, std::uint64_t shot) {
    const std::size_t n_pairs = pair_count(n_atoms);
    require(record.size() == n_atoms + n_pairs, ErrorCode::kFormat,
            "record has " + std::to_string(record.size()) + " codes, expected " +
                std::to_string(n_atoms + n_pairs));
    std::vector<AtomKind> site(n_atoms);
    for (std::uint32_t i = 0; i < n_atoms; ++i) {
        auto it = mode.fixed_atoms.find(i);
        site[i] = it != mode.fixed_atoms.end() ? it->second : atoms.decode(record[i] & 7);
    }
    MoleculeGraph mol;
    mol.shot = shot;
    std::vector<std::uint32_t> index(n_atoms, 0);
    for (std::uint32_t i = 0; i < n_atoms; ++i) {
        if (site[i] != AtomKind::kNone) {
            index[i] = static_cast<std::uint32_t>(mol.atoms.size());
            mol.atoms.push_back(site[i]);
        }
    }
    std::uint32_t p = 0;
    for (std::uint32_t i = 0; i < n_atoms; ++i) {
        for (std::uint32_t j = i + 1; j < n_atoms; ++j, ++p) {
            if (site[i] == AtomKind::kNone || site[j] == AtomKind::kNone) {
                continue;
            }
            const auto clamped = mode.clamped_bond(i, j);
            const BondKind kind = clamped ? *clamped : bonds.decode(record[n_atoms + p] & 3);
            if (kind != BondKind::kNone) {
                mol.bonds.push_back({index[i], index[j], bond_order(kind)});
            }
        }
    }
    return mol;
}

ValidationResult validate(const MoleculeGraph& mol, const ValenceTable& valence) {
    ValidationResult r;
    if (mol.empty()) {
        r.failures.push_back({FailureKind::kEmptyMolecule, 0});
        return r;
    }
    std::vector<int> used(mol.size(), 0);
    for (const Bond& b : mol.bonds) {
        used[b.a] += b.order;
        used[b.b] += b.order;
    }
    for (std::uint32_t i = 0; i < mol.size(); ++i) {
        if (used[i] > valence.of(mol.atoms[i])) {
            r.failures.push_back({FailureKind::kValenceExceeded, i});
        }
    }
    const auto adj = mol.adjacency();
    std::vector<char> seen(mol.size(), 0);
    std::vector<std::uint32_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        for (auto [w, order] : adj[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    if (reached != mol.size()) {
        r.failures.push_back({FailureKind::kDisconnected, 0});
    }
    r.valid = r.failures.empty();
    return r;
}

std::string molecule_json_line(const MoleculeGraph& mol, const ValidationResult& result) {
    using nlohmann::json;
    json atoms = json::array();
    for (AtomKind a : mol.atoms) atoms.push_back(atom_symbol(a));
    json bonds = json::array();
    for (const Bond& b : mol.bonds) bonds.push_back({b.a, b.b, b.order});
    json failures = json::array();
    for (const Failure& f : result.failures) failures.push_back(failure_text(f));
    const SmilesText smiles = mol.empty() ? SmilesText{} : to_smiles(mol);
    json line = {{"shot", mol.shot},
                 {"atoms", atoms},
                 {"bonds", bonds},
                 {"key", canonical_key(mol)},
                 {"smiles", smiles.text},
                 {"smiles_fallback", smiles.fallback},
                 {"valid", result.valid},
                 {"failures", failures}};
    return line.dump();
}

ModeSpec parse_fragment_spec(std::string_view json_text) {
    using nlohmann::json;
    ModeSpec spec;
    try {
        const json j = json::parse(json_text);
        const std::string mode = j.value("mode", "scaffold");
        spec.mode = parse_mode_name(mode == "scaffold_decoration" ? "scaffold" : mode);
        for (const auto& a : j.value("atoms", json::array())) {
            const auto site = a.at(0).get<std::uint32_t>();
            require(spec.fixed_atoms.emplace(site, parse_atom_symbol(a.at(1).get<std::string>())).second,
                    ErrorCode::kConfig, "fragment lists site " + std::to_string(site) + " twice");
        }
        for (const auto& b : j.value("bonds", json::array())) {
            auto i = b.at(0).get<std::uint32_t>();
            auto k = b.at(1).get<std::uint32_t>();
            if (i > k) std::swap(i, k);
            const BondKind kind = b.at(2).is_number() ? static_cast<BondKind>(b.at(2).get<int>())
                                                      : parse_bond_name(b.at(2).get<std::string>());
            require(static_cast<int>(kind) <= 3, ErrorCode::kConfig, "bond order outside 0..3");
            spec.fixed_bonds[{i, k}] = kind;
        }
    } catch (const json::exception& e) {
        fail(ErrorCode::kConfig, std::string("fragment file: ") + e.what());
    } catch (const Error& e) {
        fail(ErrorCode::kConfig, std::string("fragment file: ") + e.what());
    }
    return spec;
}

ModeSpec load_fragment_file(const std::string& path) { return parse_fragment_spec(read_file(path)); }

void check_fragment_valence(const ModeSpec& mode, const ValenceTable& valence) {
    std::map<std::uint32_t, int> used;
    for (const auto& [pair, kind] : mode.fixed_bonds) {
        used[pair.first] += bond_order(kind);
        used[pair.second] += bond_order(kind);
    }
    for (const auto& [site, total] : used) {
        auto it = mode.fixed_atoms.find(site);
        if (it == mode.fixed_atoms.end()) continue;
        require(total <= valence.of(it->second), ErrorCode::kConfig,
                "fixed fragment exceeds the valence of " + std::string(atom_symbol(it->second)) + " at site " +
                    std::to_string(site));
    }
}

}  // namespace sqmg
