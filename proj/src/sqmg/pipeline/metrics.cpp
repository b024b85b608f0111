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

#include <set>

#include "sqmg/common/error.hpp"
#include "sqmg/pipeline/pipeline.hpp"

namespace sqmg {

using nlohmann::json;

std::vector<DecodedMolecule> decode_batch(const SampleBatch& batch, const ModeSpec& mode,
                                          const ValenceTable& valence) {
    std::vector<DecodedMolecule> out;
    out.reserve(batch.n_shots());
    const AtomCodebook atoms;
    const BondCodebook bonds;
    for (std::uint64_t s = 0; s < batch.n_shots(); ++s) {
        DecodedMolecule m;
        m.graph = decode_shot(batch.record(s), batch.n_atoms, atoms, bonds, mode, s);
        m.result = validate(m.graph, valence);
        if (m.result.valid) m.key = canonical_key(m.graph);
        out.push_back(std::move(m));
    }
    return out;
}

namespace {

Metrics finish(std::uint64_t shots, std::uint64_t valid, std::uint64_t unique) {
    require(shots > 0, ErrorCode::kInvalidArgument, "metrics need a nonempty batch");
    Metrics m;
    m.shots = shots;
    m.valid = valid;
    m.unique = unique;
    m.validity = static_cast<double>(valid) / static_cast<double>(shots);
    m.uniqueness = valid ? static_cast<double>(unique) / static_cast<double>(valid) : 0.0;
    m.objective = m.validity * m.uniqueness;
    return m;
}

}  // namespace

Metrics compute_metrics(std::span<const DecodedMolecule> molecules) {
    std::set<std::string> keys;
    std::uint64_t valid = 0;
    for (const auto& m : molecules) {
        if (m.result.valid) {
            ++valid;
            keys.insert(m.key);
        }
    }
    return finish(molecules.size(), valid, keys.size());
}

Metrics metrics_from_molecules_jsonl(std::string_view text) {
    std::set<std::string> keys;
    std::uint64_t shots = 0;
    std::uint64_t valid = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const auto line = text.substr(pos, nl - pos);
        pos = nl + 1;
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            ++shots;
            if (j.at("valid").get<bool>()) {
                ++valid;
                keys.insert(j.at("key").get<std::string>());
            }
        } catch (const json::exception& e) {
            fail(ErrorCode::kFormat, std::string("molecules JSONL: ") + e.what());
        }
    }
    return finish(shots, valid, keys.size());
}

json metrics_json(const Metrics& m) {
    return {{"shots", m.shots},         {"valid", m.valid},           {"unique", m.unique},
            {"validity", m.validity}, {"uniqueness", m.uniqueness}, {"objective", m.objective}};
}

std::string molecules_jsonl(std::span<const DecodedMolecule> molecules) {
    std::string out;
    for (const auto& m : molecules) {
        out += molecule_json_line(m.graph, m.result);
        out += '\n';
    }
    return out;
}

}  // namespace sqmg
