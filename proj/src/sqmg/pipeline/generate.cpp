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

#include <filesystem>
#include <numbers>

#include "sqmg/common/error.hpp"
#include "sqmg/common/io.hpp"
#include "sqmg/common/rng.hpp"
#include "sqmg/pipeline/pipeline.hpp"

namespace sqmg {

using nlohmann::json;

Sampler::Sampler(const RunConfig& config)
    : config_(config),
      ansatz_(build_ansatz(config.n_atoms, config.variant, config.mode, config.conditioning)) {}

SampleBatch Sampler::sample(std::span<const double> params, std::uint64_t shots, std::uint64_t seed,
                            TruncationLog* log) const {
    if (config_.backend == Backend::kDense) {
        return run_shots(ansatz_, params, shots, seed, config_.dense_options());
    }
    MpsRun run = run_shots_mps(ansatz_, params, shots, seed, config_.mps_options());
    if (log) *log = std::move(run.log);
    return std::move(run.batch);
}

std::vector<double> random_params(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> p(n);
    for (double& v : p) v = 2.0 * std::numbers::pi * rng.uniform();
    return p;
}

std::vector<double> load_params_file(const std::string& path) {
    try {
        const json j = json::parse(read_file(path));
        const json& arr = j.is_object() ? j.at("params") : j;
        return arr.get<std::vector<double>>();
    } catch (const json::exception& e) {
        fail(ErrorCode::kConfig, path + ": " + e.what());
    }
}

GenerateResult run_generate(const RunConfig& config, std::span<const double> params) {
    config.check();
    Sampler sampler(config);
    require(params.size() == sampler.n_params(), ErrorCode::kConfig,
            "params file has " + std::to_string(params.size()) + " values but the " +
                std::string(mode_name(config.mode.mode)) + " " + std::string(variant_name(config.variant)) +
                " ansatz at N=" + std::to_string(config.n_atoms) + " has " + std::to_string(sampler.n_params()) +
                " parameters");
    GenerateResult r;
    if (config.backend == Backend::kMps) {
        r.truncation.emplace();
        r.batch = sampler.sample(params, config.shots, config.seed, &*r.truncation);
    } else {
        r.batch = sampler.sample(params, config.shots, config.seed);
    }
    r.molecules = decode_batch(r.batch, config.mode, config.valence);
    r.metrics = compute_metrics(r.molecules);
    return r;
}

GenerateResult run_decode(const RunConfig& config, const std::string& samples_path) {
    GenerateResult r;
    r.batch = read_samples(samples_path);
    require(r.batch.n_shots() > 0, ErrorCode::kFormat, "sample file has no shots");
    if (r.batch.n_atoms != config.n_atoms && config.mode.mode != GenerationMode::kDeNovo) {
        fail(ErrorCode::kConfig, "sample file atom count does not match the fragment config");
    }
    const ModeSpec mode = r.batch.n_atoms == config.n_atoms ? config.mode : ModeSpec::de_novo();
    r.molecules = decode_batch(r.batch, mode, config.valence);
    r.metrics = compute_metrics(r.molecules);
    return r;
}

json generate_summary_json(const RunConfig& config, const GenerateResult& result) {
    std::uint64_t empty = 0, valence = 0, disconnected = 0;
    for (const auto& m : result.molecules) {
        for (const auto& f : m.result.failures) {
            if (f.kind == FailureKind::kEmptyMolecule) ++empty;
            if (f.kind == FailureKind::kValenceExceeded) {
                ++valence;
                break;
            }
        }
        for (const auto& f : m.result.failures) {
            if (f.kind == FailureKind::kDisconnected) ++disconnected;
        }
    }
    json j = metrics_json(result.metrics);
    j["n_atoms"] = result.batch.n_atoms;
    j["mode"] = mode_name(config.mode.mode);
    j["variant"] = variant_name(config.variant);
    j["backend"] = backend_name(config.backend);
    j["seed"] = result.batch.seed;
    j["counts"] = {{"empty", empty},
                   {"valence_exceeded", valence},
                   {"disconnected", disconnected}};
    j["fixed_sites"] = config.mode.fixed_atoms.size();
    if (result.truncation) {
        j["truncation"] = {{"total_discarded_weight", result.truncation->total_discarded()},
                           {"max_bond_dim", result.truncation->max_bond_dim()}};
    }
    return j;
}

void write_generate_outputs(const RunConfig& config, const GenerateResult& result) {
    const std::filesystem::path dir(config.output_dir);
    std::filesystem::create_directories(dir);
    write_file((dir / "molecules.jsonl").string(), molecules_jsonl(result.molecules));
    write_file((dir / "summary.json").string(), generate_summary_json(config, result).dump(2) + "\n");
    if (config.write_samples) {
        const bool bin = config.sample_format == SampleFormat::kBinary;
        write_samples((dir / (bin ? "samples.bin" : "samples.jsonl")).string(), result.batch, config.sample_format);
    }
    if (result.truncation) {
        write_file((dir / "truncation.csv").string(), truncation_log_csv(*result.truncation));
    }
}

}  // namespace sqmg
