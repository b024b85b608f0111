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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sqmg/ansatz/ansatz.hpp"

namespace sqmg {

struct Bond {
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    int order = 1;
    bool operator==(const Bond&) const = default;
};

/// Heavy-atom graph. Hydrogens are implicit.
struct MoleculeGraph {
    std::vector<AtomKind> atoms;
    std::vector<Bond> bonds;
    std::uint64_t shot = 0;

    std::size_t size() const { return atoms.size(); }
    bool empty() const { return atoms.empty(); }
    /// Throws kInvalidArgument on out-of-range indices, self bonds,
    /// duplicate pairs, NONE atoms or orders outside 1..3.
    void check() const;
    /// Neighbour lists of (atom, bond order).
    std::vector<std::vector<std::pair<std::uint32_t, int>>> adjacency() const;
};

struct ValenceTable {
    std::array<int, 8> max_valence{0, 4, 2, 3, 6, 5, 1, 1};

    int of(AtomKind kind) const { return max_valence[static_cast<std::size_t>(kind)]; }
    void set(AtomKind kind, int v) { max_valence[static_cast<std::size_t>(kind)] = v; }
    /// Throws kConfig unless every element has a positive entry.
    void check() const;
};

enum class FailureKind : std::uint8_t { kEmptyMolecule, kValenceExceeded, kDisconnected };

struct Failure {
    FailureKind kind = FailureKind::kEmptyMolecule;
    std::uint32_t atom = 0;  // kValenceExceeded only
    bool operator==(const Failure&) const = default;
};

/// "empty", "valence_exceeded:<atom>" or "disconnected".
std::string failure_text(const Failure& f);

struct ValidationResult {
    bool valid = false;
    std::vector<Failure> failures;
};

/// Maps one SampleBatch record to a graph. Fixed atoms and bonds of `mode`
/// override the measured codes; NONE sites are dropped and indices
/// compacted; bond codes touching a NONE site are ignored.
MoleculeGraph decode_shot(std::span<const std::uint8_t> record, std::uint32_t n_atoms,
                          const AtomCodebook& atoms = {}, const BondCodebook& bonds = {},
                          const ModeSpec& mode = ModeSpec::de_novo(), std::uint64_t shot = 0);

ValidationResult validate(const MoleculeGraph& mol, const ValenceTable& valence = {});

/// Isomorphism-invariant key over element and bond-order labels.
std::string canonical_key(const MoleculeGraph& mol);
/// Canonical labelling: position k holds the atom placed at rank k.
std::vector<std::uint32_t> canonical_order(const MoleculeGraph& mol);

struct SmilesText {
    std::string text;
    bool fallback = false;  // text is the canonical key, not SMILES
};

SmilesText to_smiles(const MoleculeGraph& mol);
/// Reads the subset emitted by to_smiles: the seven elements (optionally
/// bracketed), - = # bonds, branches, ring digits, %nn and '.'.
MoleculeGraph parse_smiles(std::string_view smiles);

/// One JSON object per molecule: shot, atoms, bonds, key, smiles,
/// smiles_fallback, valid, failures.
std::string molecule_json_line(const MoleculeGraph& mol, const ValidationResult& result);

/// Fixed fragments for scaffold and linker modes, from JSON of the form
/// {"mode": "scaffold", "atoms": [[site, "C"], ...], "bonds": [[i, j, "double"], ...]}.
ModeSpec parse_fragment_spec(std::string_view json_text);
ModeSpec load_fragment_file(const std::string& path);
/// Throws kConfig when fixed bonds alone exceed a fixed atom's valence.
void check_fragment_valence(const ModeSpec& mode, const ValenceTable& valence = {});

}  // namespace sqmg
