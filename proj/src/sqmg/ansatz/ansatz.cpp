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

#include "sqmg/ansatz/ansatz.hpp"

#include <algorithm>
#include <numeric>

#include "sqmg/common/error.hpp"

namespace sqmg {

namespace {

constexpr std::array<std::string_view, 8> kAtomSymbols = {"NONE", "C", "O", "N", "S", "P", "F", "Cl"};
constexpr std::array<std::string_view, 4> kBondNames = {"none", "single", "double", "triple"};

}  // namespace

std::string_view atom_symbol(AtomKind kind) { return kAtomSymbols.at(static_cast<std::size_t>(kind)); }

AtomKind parse_atom_symbol(std::string_view symbol) {
    for (std::size_t i = 0; i < kAtomSymbols.size(); ++i) {
        if (kAtomSymbols[i] == symbol) {
            return static_cast<AtomKind>(i);
        }
    }
    fail(ErrorCode::kInvalidArgument, "unknown atom symbol '" + std::string(symbol) + "'");
}

std::string_view bond_name(BondKind kind) { return kBondNames.at(static_cast<std::size_t>(kind)); }

BondKind parse_bond_name(std::string_view name) {
    for (std::size_t i = 0; i < kBondNames.size(); ++i) {
        if (kBondNames[i] == name) {
            return static_cast<BondKind>(i);
        }
    }
    fail(ErrorCode::kInvalidArgument, "unknown bond kind '" + std::string(name) + "'");
}

std::uint8_t AtomCodebook::encode(AtomKind kind) const {
    for (std::size_t c = 0; c < by_code.size(); ++c) {
        if (by_code[c] == kind) {
            return static_cast<std::uint8_t>(c);
        }
    }
    fail(ErrorCode::kInvalidArgument, "atom kind " + std::string(atom_symbol(kind)) + " has no code");
}

void AtomCodebook::check() const {
    require(by_code[0] == AtomKind::kNone, ErrorCode::kInvalidArgument, "atom codebook: code 000 must be NONE");
    std::array<bool, 8> seen{};
    for (AtomKind k : by_code) {
        const auto i = static_cast<std::size_t>(k);
        require(i < seen.size() && !seen[i], ErrorCode::kInvalidArgument, "atom codebook is not a bijection");
        seen[i] = true;
    }
}

std::uint8_t BondCodebook::encode(BondKind kind) const {
    for (std::size_t c = 0; c < by_code.size(); ++c) {
        if (by_code[c] == kind) {
            return static_cast<std::uint8_t>(c);
        }
    }
    fail(ErrorCode::kInvalidArgument, "bond kind has no code");
}

void BondCodebook::check() const {
    require(by_code[0] == BondKind::kNone, ErrorCode::kInvalidArgument, "bond codebook: code 00 must be no bond");
    std::array<bool, 4> seen{};
    for (BondKind k : by_code) {
        const auto i = static_cast<std::size_t>(k);
        require(i < seen.size() && !seen[i], ErrorCode::kInvalidArgument, "bond codebook is not a bijection");
        seen[i] = true;
    }
}

std::string_view mode_name(GenerationMode mode) {
    switch (mode) {
        case GenerationMode::kDeNovo:
            return "de_novo";
        case GenerationMode::kScaffoldDecoration:
            return "scaffold";
        case GenerationMode::kLinker:
            return "linker";
    }
    return "de_novo";
}

GenerationMode parse_mode_name(std::string_view name) {
    if (name == "de_novo") return GenerationMode::kDeNovo;
    if (name == "scaffold") return GenerationMode::kScaffoldDecoration;
    if (name == "linker") return GenerationMode::kLinker;
    fail(ErrorCode::kInvalidArgument, "unknown generation mode '" + std::string(name) + "'");
}

std::string_view variant_name(AnsatzVariant v) { return v == AnsatzVariant::kHybrid ? "hybrid" : "static"; }

AnsatzVariant parse_variant_name(std::string_view name) {
    if (name == "hybrid") return AnsatzVariant::kHybrid;
    if (name == "static") return AnsatzVariant::kStatic;
    fail(ErrorCode::kInvalidArgument, "unknown ansatz variant '" + std::string(name) + "'");
}

std::string_view conditioning_name(Conditioning c) {
    return c == Conditioning::kEarlyMeasured ? "early_measured" : "quantum_controlled";
}

Conditioning parse_conditioning_name(std::string_view name) {
    if (name == "early_measured") return Conditioning::kEarlyMeasured;
    if (name == "quantum_controlled") return Conditioning::kQuantumControlled;
    fail(ErrorCode::kInvalidArgument, "unknown conditioning '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// ModeSpec

std::vector<std::uint32_t> ModeSpec::free_sites(std::uint32_t n_atoms) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t s = 0; s < n_atoms; ++s) {
        if (!is_fixed(s)) {
            out.push_back(s);
        }
    }
    return out;
}

std::optional<BondKind> ModeSpec::clamped_bond(std::uint32_t i, std::uint32_t j) const {
    if (i > j) {
        std::swap(i, j);
    }
    if (auto it = fixed_bonds.find({i, j}); it != fixed_bonds.end()) {
        return it->second;
    }
    if (is_fixed(i) && is_fixed(j)) {
        return BondKind::kNone;
    }
    return std::nullopt;
}

namespace {

std::size_t fixed_component_count(const ModeSpec& spec) {
    std::map<std::uint32_t, std::uint32_t> parent;
    for (const auto& [site, kind] : spec.fixed_atoms) {
        parent[site] = site;
    }
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& [pair, kind] : spec.fixed_bonds) {
        if (kind != BondKind::kNone) {
            parent[find(pair.first)] = find(pair.second);
        }
    }
    std::size_t roots = 0;
    for (const auto& [site, p] : parent) {
        roots += find(site) == site ? 1 : 0;
    }
    return roots;
}

}  // namespace

void ModeSpec::check(std::uint32_t n_atoms) const {
    const auto bad = [](const std::string& what) { fail(ErrorCode::kInvalidArgument, "mode spec: " + what); };
    for (const auto& [site, kind] : fixed_atoms) {
        if (site >= n_atoms) bad("fixed atom site " + std::to_string(site) + " out of range");
        if (kind == AtomKind::kNone) bad("fixed atom at site " + std::to_string(site) + " is NONE");
    }
    for (const auto& [pair, kind] : fixed_bonds) {
        if (pair.first >= pair.second) bad("fixed bond keys must satisfy i < j");
        if (pair.second >= n_atoms) bad("fixed bond site out of range");
        if (!is_fixed(pair.first) || !is_fixed(pair.second)) bad("fixed bonds may only join fixed sites");
    }
    switch (mode) {
        case GenerationMode::kDeNovo:
            if (!fixed_atoms.empty() || !fixed_bonds.empty()) bad("de novo mode takes no fixed atoms or bonds");
            break;
        case GenerationMode::kScaffoldDecoration:
            if (fixed_atoms.empty()) bad("scaffold decoration needs at least one fixed atom");
            break;
        case GenerationMode::kLinker:
            if (fixed_component_count(*this) != 2) bad("linker mode needs exactly two disjoint fixed fragments");
            break;
    }
    if (mode != GenerationMode::kDeNovo && fixed_atoms.size() == n_atoms) {
        bad("no free sites left to generate");
    }
}

// ---------------------------------------------------------------------------
// Scaling

std::uint64_t param_count(std::uint64_t n_atoms) {
    require(n_atoms >= 1, ErrorCode::kInvalidArgument, "param_count: n_atoms must be >= 1");
    return n_atoms * n_atoms + 9 * n_atoms - 1;
}

std::uint64_t qubit_count(std::uint64_t n_atoms, AnsatzVariant variant) {
    require(n_atoms >= 1, ErrorCode::kInvalidArgument, "qubit_count: n_atoms must be >= 1");
    return variant == AnsatzVariant::kHybrid ? 3 * n_atoms + 2 : n_atoms * (n_atoms + 2);
}

// ---------------------------------------------------------------------------
// Builders

namespace {

ParamLayout make_layout(std::uint32_t n, const ModeSpec& mode) {
    ParamLayout layout;
    layout.n_atoms = n;
    layout.atom_slots.resize(n);
    layout.pair_slots.resize(pair_count(n));
    std::uint32_t next = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        if (mode.is_fixed(i)) {
            continue;
        }
        const std::uint32_t count = i == 0 ? 9 : 10;
        layout.atom_slots[i] = SlotRange{next, count};
        next += count;
    }
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j) {
            if (!mode.clamped_bond(i, j)) {
                layout.pair_slots[pair_index(i, j, n)] = SlotRange{next, 2};
                next += 2;
            }
        }
    }
    layout.total = next;
    return layout;
}

Ansatz build(std::uint32_t n, AnsatzVariant variant, const ModeSpec& mode, Conditioning conditioning,
             const AtomCodebook& codebook) {
    require(n >= 1, ErrorCode::kInvalidArgument, "ansatz: n_atoms must be >= 1");
    mode.check(n);
    codebook.check();

    Ansatz a;
    a.n_atoms = n;
    a.mode = mode;
    a.variant = variant;
    a.conditioning = conditioning;
    a.layout = make_layout(n, mode);

    const auto pairs = static_cast<std::uint32_t>(pair_count(n));
    const auto n_qubits = static_cast<std::uint32_t>(qubit_count(n, variant));
    a.circuit = Circuit(n_qubits, a.layout.total, 3 * n + 2 * pairs);
    Circuit& c = a.circuit;
    const bool early = conditioning == Conditioning::kEarlyMeasured;

    auto atom_qubit = [](std::uint32_t atom, std::uint32_t k) -> Qubit { return 3 * atom + k; };
    auto measure_atom = [&](std::uint32_t i) {
        for (std::uint32_t k = 0; k < 3; ++k) {
            c.append(MeasureGate{atom_qubit(i, k), atom_slot(i, k)});
        }
    };

    for (std::uint32_t i = 0; i < n; ++i) {
        if (auto it = mode.fixed_atoms.find(i); it != mode.fixed_atoms.end()) {
            const std::uint8_t code = codebook.encode(it->second);
            for (std::uint32_t k = 0; k < 3; ++k) {
                if ((code >> (2 - k)) & 1) {
                    c.append(PauliXGate{atom_qubit(i, k)});
                }
            }
        } else {
            const std::uint32_t base = a.layout.atom_slots[i]->begin;
            if (i >= 1) {
                c.append(ControlledRyGate{atom_qubit(i - 1, 2), atom_qubit(i, 0), base + 9});
            }
            for (std::uint32_t layer = 0; layer < 3; ++layer) {
                for (std::uint32_t k = 0; k < 3; ++k) {
                    c.append(RyGate{atom_qubit(i, k), base + 3 * layer + k});
                }
                if (layer == 0) {
                    c.append(CnotGate{atom_qubit(i, 0), atom_qubit(i, 1)});
                } else if (layer == 1) {
                    c.append(CnotGate{atom_qubit(i, 2), atom_qubit(i, 1)});
                }
            }
        }
        if (early) {
            measure_atom(i);
        }
    }

    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j) {
            const std::uint32_t p = pair_index(i, j, n);
            const auto& slots = a.layout.pair_slots[p];
            if (!slots) {
                continue;
            }
            const Qubit b0 = variant == AnsatzVariant::kHybrid ? 3 * n : 3 * n + 2 * p;
            const Qubit b1 = b0 + 1;
            if (early) {
                ConditionedGroup group;
                group.condition =
                    ClassicalPredicate::both(ClassicalPredicate::non_zero({atom_slot(i, 0), atom_slot(i, 1), atom_slot(i, 2)}),
                                             ClassicalPredicate::non_zero({atom_slot(j, 0), atom_slot(j, 1), atom_slot(j, 2)}));
                group.body.emplace_back(RyGate{b0, slots->begin});
                group.body.emplace_back(RyGate{b1, slots->begin + 1});
                group.body.emplace_back(CnotGate{b0, b1});
                c.append(std::move(group));
            } else {
                const std::vector<std::vector<Qubit>> regs = {
                    {atom_qubit(i, 0), atom_qubit(i, 1), atom_qubit(i, 2)},
                    {atom_qubit(j, 0), atom_qubit(j, 1), atom_qubit(j, 2)}};
                c.append(PresenceRyGate{regs, b0, slots->begin});
                c.append(PresenceRyGate{regs, b1, slots->begin + 1});
                c.append(CnotGate{b0, b1});
            }
            c.append(MeasureGate{b0, pair_slot(n, p, 0)});
            c.append(MeasureGate{b1, pair_slot(n, p, 1)});
            if (variant == AnsatzVariant::kHybrid) {
                c.append(ResetGate{b0});
                c.append(ResetGate{b1});
            }
        }
    }

    if (!early) {
        for (std::uint32_t i = 0; i < n; ++i) {
            measure_atom(i);
        }
    }
    return a;
}

}  // namespace

Ansatz build_hybrid_ansatz(std::uint32_t n_atoms, const ModeSpec& mode, Conditioning conditioning,
                           const AtomCodebook& atoms) {
    return build(n_atoms, AnsatzVariant::kHybrid, mode, conditioning, atoms);
}

Ansatz build_static_ansatz(std::uint32_t n_atoms, const ModeSpec& mode, Conditioning conditioning,
                           const AtomCodebook& atoms) {
    return build(n_atoms, AnsatzVariant::kStatic, mode, conditioning, atoms);
}

Ansatz build_ansatz(std::uint32_t n_atoms, AnsatzVariant variant, const ModeSpec& mode, Conditioning conditioning,
                    const AtomCodebook& atoms) {
    return build(n_atoms, variant, mode, conditioning, atoms);
}

}  // namespace sqmg
