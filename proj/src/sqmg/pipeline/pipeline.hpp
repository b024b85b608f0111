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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sqmg/molgraph/molecule.hpp"
#include "sqmg/pipeline/config.hpp"
#include "sqmg/sim/simulate.hpp"

namespace sqmg {

// ---- metrics ---------------------------------------------------------------

struct DecodedMolecule {
    MoleculeGraph graph;
    ValidationResult result;
    std::string key;  // empty unless valid
};

struct Metrics {
    std::uint64_t shots = 0;
    std::uint64_t valid = 0;
    std::uint64_t unique = 0;
    double validity = 0.0;
    double uniqueness = 0.0;
    double objective = 0.0;
};

std::vector<DecodedMolecule> decode_batch(const SampleBatch& batch, const ModeSpec& mode,
                                          const ValenceTable& valence);
/// Throws kInvalidArgument on an empty batch.
Metrics compute_metrics(std::span<const DecodedMolecule> molecules);
/// Recomputes metrics from a molecules JSONL file's contents.
Metrics metrics_from_molecules_jsonl(std::string_view text);
nlohmann::json metrics_json(const Metrics& m);

std::string molecules_jsonl(std::span<const DecodedMolecule> molecules);

// ---- sampling --------------------------------------------------------------

/// Builds the ansatz for a config and samples it on the configured backend.
class Sampler {
   public:
    explicit Sampler(const RunConfig& config);

    const Ansatz& ansatz() const { return ansatz_; }
    std::uint32_t n_params() const { return ansatz_.circuit.n_params(); }
    SampleBatch sample(std::span<const double> params, std::uint64_t shots, std::uint64_t seed,
                       TruncationLog* log = nullptr) const;

   private:
    RunConfig config_;
    Ansatz ansatz_;
};

/// Uniform [0, 2pi) parameters from a seed.
std::vector<double> random_params(std::size_t n, std::uint64_t seed);

// ---- training --------------------------------------------------------------

struct HistoryRow {
    std::uint32_t iteration = 0;
    std::vector<double> x;
    double y = 0.0;
    double validity = 0.0;
    double uniqueness = 0.0;
    double running_max = 0.0;
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;  // written to the timing sidecar only
};

struct TrainResult {
    std::vector<HistoryRow> history;
    std::vector<double> best_x;
    double best_y = 0.0;
    std::uint32_t best_iteration = 0;
    std::uint32_t replayed = 0;
};

using TrainProgress = std::function<void(const HistoryRow&)>;

/// Runs the configured optimizer for `config.budget` evaluations. Rows of
/// `resume_from` are replayed without simulation while the optimizer
/// proposes bit-identical points. Throws "empty budget" for budget 0.
TrainResult run_train(const RunConfig& config, std::span<const HistoryRow> resume_from = {},
                      const TrainProgress& progress = nullptr);

std::string history_jsonl(std::span<const HistoryRow> rows, OptimizerKind optimizer);
std::string history_timing_jsonl(std::span<const HistoryRow> rows);
std::vector<HistoryRow> parse_history_jsonl(std::string_view text);
nlohmann::json best_params_json(const RunConfig& config, const TrainResult& result);
nlohmann::json train_summary_json(const RunConfig& config, const TrainResult& result);

/// Writes history.jsonl, history.timing.jsonl, best_params.json and
/// train_summary.json to config.output_dir.
void write_train_outputs(const RunConfig& config, const TrainResult& result);

// ---- generation ------------------------------------------------------------

struct GenerateResult {
    SampleBatch batch;
    std::vector<DecodedMolecule> molecules;
    Metrics metrics;
    std::optional<TruncationLog> truncation;
};

/// Accepts a bare JSON array or an object with a "params" array.
std::vector<double> load_params_file(const std::string& path);

GenerateResult run_generate(const RunConfig& config, std::span<const double> params);
nlohmann::json generate_summary_json(const RunConfig& config, const GenerateResult& result);
/// Writes molecules.jsonl and summary.json, plus samples and the truncation
/// CSV when requested.
void write_generate_outputs(const RunConfig& config, const GenerateResult& result);

/// Decodes a sample file under the config's mode and valence table.
GenerateResult run_decode(const RunConfig& config, const std::string& samples_path);

// ---- benchmarking ----------------------------------------------------------

struct BenchRecord {
    Backend backend = Backend::kDense;
    AnsatzVariant variant = AnsatzVariant::kHybrid;
    std::uint32_t n_atoms = 0;
    std::uint32_t qubits = 0;
    std::uint64_t shots = 0;
    std::string status = "ok";  // ok | capacity_error
    std::vector<double> runs_s;
    double median_s = 0.0;
    std::uint32_t peak_bond_dim = 0;   // mps
    double amplitudes = 0.0;           // dense, 2^qubits
};

using BenchProgress = std::function<void(const BenchRecord&)>;

std::vector<BenchRecord> run_bench(const RunConfig& config, const BenchProgress& progress = nullptr);
std::string bench_csv(std::span<const BenchRecord> records);
std::vector<BenchRecord> parse_bench_csv(std::string_view text);
/// Writes bench.csv and bench_summary.json to config.output_dir.
void write_bench_outputs(const RunConfig& config, std::span<const BenchRecord> records);

struct ScalingFit {
    Backend backend = Backend::kDense;
    AnsatzVariant variant = AnsatzVariant::kHybrid;
    std::uint32_t points = 0;
    std::uint32_t n_min = 0;
    std::uint32_t n_max = 0;
    double slope = 0.0;  // d ln(runtime) / dN
    double intercept = 0.0;
    double factor_per_atom() const;
};

/// Least-squares fit of ln(median runtime) against N over ok rows, per
/// (backend, variant), optionally restricted to [n_min, n_max].
std::vector<ScalingFit> fit_scaling(std::span<const BenchRecord> records, std::uint32_t n_min = 0,
                                    std::uint32_t n_max = UINT32_MAX);

struct ReuseRatio {
    std::uint32_t n_atoms = 0;
    double hybrid_s = 0.0;
    double static_s = 0.0;
    double static_over_hybrid() const { return static_s / hybrid_s; }
};

/// Static vs hybrid medians per N on the MPS backend.
std::vector<ReuseRatio> reuse_ratios(std::span<const BenchRecord> records);

nlohmann::json bench_summary_json(std::span<const BenchRecord> records);
/// Tidy CSV of fits and ratios, regenerated from benchmark rows alone.
std::string bench_report_csv(std::span<const BenchRecord> records);

// ---- reporting -------------------------------------------------------------

/// iteration, y, running_max, moving_avg3 (trailing three-evaluation mean).
std::string trajectory_csv(std::span<const HistoryRow> rows);

/// Derives plot-ready tables from a result file, detected by content:
/// history JSONL -> trajectory.csv; bench CSV -> bench_report.csv and
/// bench_summary.json; molecules JSONL -> metrics.json. Returns the paths
/// written under output_dir.
std::vector<std::string> run_report(const std::string& input_path, const std::string& output_dir);

}  // namespace sqmg
