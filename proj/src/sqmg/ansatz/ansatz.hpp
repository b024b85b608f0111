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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sqmg/circuit/circuit.hpp"

namespace sqmg {

enum class AtomKind : std::uint8_t { kNone = 0, kC, kO, kN, kS, kP, kF, kCl };
enum class BondKind : std::uint8_t { kNone = 0, kSingle = 1, kDouble = 2, kTriple = 3 };

inline constexpr std::array<AtomKind, 7> kElements = {AtomKind::kC, AtomKind::kO, AtomKind::kN, AtomKind::kS,
                                                      AtomKind::kP, AtomKind::kF, AtomKind::kCl};

std::string_view atom_symbol(AtomKind kind);
/// Accepts element symbols and "NONE"; throws kInvalidArgument otherwise.
AtomKind parse_atom_symbol(std::string_view symbol);
std::string_view bond_name(BondKind kind);
BondKind parse_bond_name(std::string_view name);
inline int bond_order(BondKind kind) { return static_cast<int>(kind); }

/// 3-bit code -> atom kind. Code 0 is always NONE and the map is a bijection.
struct AtomCodebook {
    std::array<AtomKind, 8> by_code{AtomKind::kNone, AtomKind::kC, AtomKind::kO, AtomKind::kN,
                                    AtomKind::kS,    AtomKind::kP, AtomKind::kF, AtomKind::kCl};

    AtomKind decode(std::uint8_t code) const { return by_code.at(code); }
    std::uint8_t encode(AtomKind kind) const;
    /// Throws kInvalidArgument when the table is not a bijection with 0 -> NONE.
    void check() const;
};

/// 2-bit code -> bond kind. Code 0 is always "no bond".
struct BondCodebook {
    std::array<BondKind, 4> by_code{BondKind::kNone, BondKind::kSingle, BondKind::kDouble, BondKind::kTriple};

    BondKind decode(std::uint8_t code) const { return by_code.at(code); }
    std::uint8_t encode(BondKind kind) const;
    void check() const;
};

enum class GenerationMode : std::uint8_t { kDeNovo, kScaffoldDecoration, kLinker };

std::string_view mode_name(GenerationMode mode);
GenerationMode parse_mode_name(std::string_view name);

using SitePair = std::pair<std::uint32_t, std::uint32_t>;

/// Which atom sites and bonds are clamped. Bond keys are stored with first < second.
struct ModeSpec {
    GenerationMode mode = GenerationMode::kDeNovo;
    std::map<std::uint32_t, AtomKind> fixed_atoms;
    std::map<SitePair, BondKind> fixed_bonds;

    bool is_fixed(std::uint32_t site) const { return fixed_atoms.count(site) != 0; }
    std::vector<std::uint32_t> free_sites(std::uint32_t n_atoms) const;
    /// Bond kind clamped for pair (i, j), if any. Pairs of two fixed sites are
    /// always clamped, to kNone when no bond was listed.
    std::optional<BondKind> clamped_bond(std::uint32_t i, std::uint32_t j) const;

    /// Throws kInvalidArgument when the spec breaks the per-mode invariants.
    void check(std::uint32_t n_atoms) const;

    static ModeSpec de_novo() { return {}; }
};

/// Number of unordered atom pairs.
constexpr std::uint64_t pair_count(std::uint64_t n_atoms) { return n_atoms * (n_atoms - 1) / 2; }

/// Lexicographic index of pair (i, j), i < j.
constexpr std::uint32_t pair_index(std::uint32_t i, std::uint32_t j, std::uint32_t n_atoms) {
    return i * n_atoms - i * (i + 1) / 2 + (j - i - 1);
}

/// Classical slot layout shared by every ansatz variant: atom i owns slots
/// 3i..3i+2 (most significant bit first), pair p owns 3N+2p and 3N+2p+1.
constexpr ClassicalSlot atom_slot(std::uint32_t atom, std::uint32_t bit) { return 3 * atom + bit; }
constexpr ClassicalSlot pair_slot(std::uint32_t n_atoms, std::uint32_t pair, std::uint32_t bit) {
    return 3 * n_atoms + 2 * pair + bit;
}

struct SlotRange {
    std::uint32_t begin = 0;
    std::uint32_t count = 0;
    bool operator==(const SlotRange&) const = default;
};

/// Parameter slot allocation. Atom blocks come first in site order; a free
/// atom's slots are 3*layer + qubit for its nine Ry rotations, and slot 9 is
/// the rotation controlled by the previous atom (sites >= 1 only). Pair
/// blocks follow in lexicographic pair order, one slot per bond qubit.
struct ParamLayout {
    std::uint32_t n_atoms = 0;
    std::vector<std::optional<SlotRange>> atom_slots;
    std::vector<std::optional<SlotRange>> pair_slots;
    std::uint32_t total = 0;
};

enum class AnsatzVariant : std::uint8_t { kHybrid, kStatic };
enum class Conditioning : std::uint8_t { kQuantumControlled, kEarlyMeasured };

std::string_view variant_name(AnsatzVariant v);
AnsatzVariant parse_variant_name(std::string_view name);
std::string_view conditioning_name(Conditioning c);
Conditioning parse_conditioning_name(std::string_view name);

/// N^2 + 9N - 1, the de novo parameter count.
std::uint64_t param_count(std::uint64_t n_atoms);
/// Hybrid: 3N + 2. Static: N(N + 2).
std::uint64_t qubit_count(std::uint64_t n_atoms, AnsatzVariant variant);

struct Ansatz {
    Circuit circuit;
    ParamLayout layout;
    ModeSpec mode;
    AnsatzVariant variant = AnsatzVariant::kHybrid;
    Conditioning conditioning = Conditioning::kEarlyMeasured;
    std::uint32_t n_atoms = 0;
};

/// 3N + 2 qubits: one 3-qubit register per atom and a single 2-qubit bond
/// register that is measured and reset after every pair.
Ansatz build_hybrid_ansatz(std::uint32_t n_atoms, const ModeSpec& mode = ModeSpec::de_novo(),
                           Conditioning conditioning = Conditioning::kEarlyMeasured,
                           const AtomCodebook& atoms = AtomCodebook{});

/// N(N + 2) qubits: every pair owns its bond register, nothing is reset.
Ansatz build_static_ansatz(std::uint32_t n_atoms, const ModeSpec& mode = ModeSpec::de_novo(),
                           Conditioning conditioning = Conditioning::kEarlyMeasured,
                           const AtomCodebook& atoms = AtomCodebook{});

Ansatz build_ansatz(std::uint32_t n_atoms, AnsatzVariant variant, const ModeSpec& mode, Conditioning conditioning,
                    const AtomCodebook& atoms = AtomCodebook{});

}  // namespace sqmg
