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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sqmg/ansatz/ansatz.hpp"
#include "sqmg/molgraph/molecule.hpp"
#include "sqmg/sim/simulate.hpp"

namespace sqmg {

inline constexpr int kConfigVersion = 1;

enum class Backend : std::uint8_t { kDense, kMps };
std::string_view backend_name(Backend b);
Backend parse_backend_name(std::string_view name);

enum class OptimizerKind : std::uint8_t { kCobyla, kBo };
std::string_view optimizer_name(OptimizerKind o);
OptimizerKind parse_optimizer_name(std::string_view name);

struct BenchConfig {
    std::vector<std::uint32_t> dense_n{2, 3, 4, 5, 6, 7, 8, 10};
    std::vector<std::uint32_t> mps_n{8, 12, 16, 20};
    std::vector<AnsatzVariant> variants{AnsatzVariant::kHybrid, AnsatzVariant::kStatic};
    std::uint64_t shots = 1000;
    std::uint64_t dense_shots = 1000;
    std::uint32_t repetitions = 3;
    /// "zeros" or "random" (uniform in [0, 2pi), drawn from the run seed).
    std::string params = "random";
};

struct RunConfig {
    std::uint32_t n_atoms = 2;
    AnsatzVariant variant = AnsatzVariant::kHybrid;
    Conditioning conditioning = Conditioning::kEarlyMeasured;
    Backend backend = Backend::kMps;
    std::uint32_t max_qubits = 30;
    std::uint32_t chi_max = 64;
    double threshold = 1e-12;
    std::uint64_t memory_budget_mb = 2048;
    unsigned threads = 1;
    std::uint64_t shots = 1000;
    std::uint64_t seed = 1;

    OptimizerKind optimizer = OptimizerKind::kBo;
    std::uint32_t budget = 150;
    double rhobeg = 1.0;
    double rhoend = 1e-3;
    std::uint32_t bo_initial = 10;
    double bo_xi = 0.01;
    std::uint32_t bo_candidates = 4096;
    std::uint32_t bo_polish_steps = 16;
    double bo_local_fraction = 0.9;
    double bo_local_width = 2.0;

    ModeSpec mode;
    std::string fragment_file;  // informational; the fragment is resolved at load
    ValenceTable valence;

    std::string output_dir = "out";
    std::string params_file;
    SampleFormat sample_format = SampleFormat::kJsonl;
    bool write_samples = false;

    BenchConfig bench;

    DenseOptions dense_options() const;
    MpsOptions mps_options() const;
    /// Throws kConfig when fields are inconsistent, including a dense
    /// backend whose qubit count exceeds the cap.
    void check() const;
};

/// Defaults as JSON; every key accepted by config_from_json is present.
nlohmann::json default_config_json();
nlohmann::json config_to_json(const RunConfig& c);
/// `base_dir` resolves a relative mode.fragment_file.
RunConfig config_from_json(const nlohmann::json& j, const std::string& base_dir = ".");

/// Applies "a.b.c=value" where value is parsed as JSON, falling back to a
/// plain string. Unknown paths throw kConfig.
void apply_override(nlohmann::json& j, std::string_view assignment);

/// Reads a JSON config file, applies overrides, validates.
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});
/// Defaults plus overrides, no file.
RunConfig make_config(const std::vector<std::string>& overrides = {});

}  // namespace sqmg
