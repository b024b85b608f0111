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

#include <chrono>
#include <filesystem>
#include <numbers>

#include "sqmg/common/error.hpp"
#include "sqmg/common/io.hpp"
#include "sqmg/common/rng.hpp"
#include "sqmg/optim/bayesopt.hpp"
#include "sqmg/optim/cobyla.hpp"
#include "sqmg/pipeline/pipeline.hpp"

namespace sqmg {

using nlohmann::json;

namespace {

constexpr std::uint64_t kCobylaSeedStream = 0xC0B71A;
constexpr std::uint64_t kInitialPointStream = 0x1417;

class Trainer {
   public:
    Trainer(const RunConfig& config, std::span<const HistoryRow> resume, const TrainProgress& progress)
        : config_(config), sampler_(config), resume_(resume), progress_(progress) {}

    std::uint32_t dimension() const { return sampler_.n_params(); }

    /// Evaluates Validity x Uniqueness at x with the given simulator seed.
    double evaluate(std::span<const double> x, std::uint64_t seed) {
        const auto t0 = std::chrono::steady_clock::now();
        HistoryRow row;
        row.iteration = static_cast<std::uint32_t>(result_.history.size());
        row.x.assign(x.begin(), x.end());
        row.seed = seed;
        if (row.iteration < resume_.size() && resume_[row.iteration].x == row.x &&
            resume_[row.iteration].seed == seed) {
            const HistoryRow& old = resume_[row.iteration];
            row.y = old.y;
            row.validity = old.validity;
            row.uniqueness = old.uniqueness;
            row.wall_time_s = old.wall_time_s;
            ++result_.replayed;
        } else {
            const SampleBatch batch = sampler_.sample(x, config_.shots, seed);
            const Metrics m = compute_metrics(decode_batch(batch, config_.mode, config_.valence));
            row.y = m.objective;
            row.validity = m.validity;
            row.uniqueness = m.uniqueness;
            row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
        if (result_.history.empty() || row.y > result_.best_y) {
            result_.best_y = row.y;
            result_.best_x = row.x;
            result_.best_iteration = row.iteration;
        }
        row.running_max = result_.best_y;
        result_.history.push_back(row);
        if (progress_) progress_(result_.history.back());
        return row.y;
    }

    TrainResult take() { return std::move(result_); }

   private:
    const RunConfig& config_;
    Sampler sampler_;
    std::span<const HistoryRow> resume_;
    const TrainProgress& progress_;
    TrainResult result_;
};

}  // namespace

TrainResult run_train(const RunConfig& config, std::span<const HistoryRow> resume_from,
                      const TrainProgress& progress) {
    require(config.budget > 0, ErrorCode::kConfig, "empty budget: optimizer.budget must be at least 1");
    config.check();
    Trainer trainer(config, resume_from, progress);
    const std::uint32_t d = trainer.dimension();
    const double two_pi = 2.0 * std::numbers::pi;

    if (config.optimizer == OptimizerKind::kCobyla) {
        const std::uint64_t seed = substream_seed(config.seed, kCobylaSeedStream);
        CobylaOptions opt;
        opt.rhobeg = config.rhobeg;
        opt.rhoend = config.rhoend;
        opt.maxfun = config.budget;
        opt.lower.assign(d, 0.0);
        opt.upper.assign(d, two_pi);
        auto x0 = random_params(d, substream_seed(config.seed, kInitialPointStream));
        cobyla_minimize([&](std::span<const double> x) { return -trainer.evaluate(x, seed); }, std::move(x0), opt);
    } else {
        Box box{std::vector<double>(d, 0.0), std::vector<double>(d, two_pi)};
        BoOptions opt;
        opt.xi = config.bo_xi;
        opt.candidates = config.bo_candidates;
        opt.polish_steps = config.bo_polish_steps;
        opt.local_fraction = config.bo_local_fraction;
        opt.local_width = config.bo_local_width;
        BayesOpt bo(box, config.seed, config.bo_initial, opt);
        for (std::uint32_t t = 0; t < config.budget; ++t) {
            BoProposal p = bo.ask();
            const double y = trainer.evaluate(p.x, substream_seed(config.seed, t + 1));
            bo.tell(std::move(p.x), y);
        }
    }
    return trainer.take();
}

std::string history_jsonl(std::span<const HistoryRow> rows, OptimizerKind optimizer) {
    std::string out;
    for (const auto& r : rows) {
        json j = {{"iteration", r.iteration},
                  {"optimizer", optimizer_name(optimizer)},
                  {"x", r.x},
                  {"y", r.y},
                  {"validity", r.validity},
                  {"uniqueness", r.uniqueness},
                  {"running_max", r.running_max},
                  {"seed", r.seed}};
        out += j.dump() + "\n";
    }
    return out;
}

std::string history_timing_jsonl(std::span<const HistoryRow> rows) {
    std::string out;
    for (const auto& r : rows) out += json{{"iteration", r.iteration}, {"wall_time_s", r.wall_time_s}}.dump() + "\n";
    return out;
}

std::vector<HistoryRow> parse_history_jsonl(std::string_view text) {
    std::vector<HistoryRow> rows;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        const auto line = text.substr(pos, nl - pos);
        pos = nl + 1;
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            HistoryRow r;
            r.iteration = j.at("iteration").get<std::uint32_t>();
            r.x = j.at("x").get<std::vector<double>>();
            r.y = j.at("y").get<double>();
            r.validity = j.value("validity", 0.0);
            r.uniqueness = j.value("uniqueness", 0.0);
            r.running_max = j.value("running_max", r.y);
            r.seed = j.value("seed", std::uint64_t{0});
            r.wall_time_s = j.value("wall_time_s", 0.0);
            rows.push_back(std::move(r));
        } catch (const json::exception& e) {
            fail(ErrorCode::kFormat, std::string("history JSONL: ") + e.what());
        }
    }
    return rows;
}

json best_params_json(const RunConfig& config, const TrainResult& result) {
    return {{"n_atoms", config.n_atoms},
            {"variant", variant_name(config.variant)},
            {"mode", mode_name(config.mode.mode)},
            {"iteration", result.best_iteration},
            {"objective", result.best_y},
            {"params", result.best_x}};
}

json train_summary_json(const RunConfig& config, const TrainResult& result) {
    json running = json::array();
    for (const auto& r : result.history) running.push_back(r.running_max);
    return {{"optimizer", optimizer_name(config.optimizer)},
            {"n_atoms", config.n_atoms},
            {"evaluations", result.history.size()},
            {"replayed", result.replayed},
            {"best_objective", result.best_y},
            {"best_iteration", result.best_iteration},
            {"running_max", running},
            {"seed", config.seed}};
}

void write_train_outputs(const RunConfig& config, const TrainResult& result) {
    const std::filesystem::path dir(config.output_dir);
    std::filesystem::create_directories(dir);
    write_file((dir / "history.jsonl").string(), history_jsonl(result.history, config.optimizer));
    write_file((dir / "history.timing.jsonl").string(), history_timing_jsonl(result.history));
    write_file((dir / "best_params.json").string(), best_params_json(config, result).dump(2) + "\n");
    write_file((dir / "train_summary.json").string(), train_summary_json(config, result).dump(2) + "\n");
}

}  // namespace sqmg
