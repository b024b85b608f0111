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


#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sqmg/sqmg.h"

namespace {

struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
    bool progress = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("-c,--config", c.config_path, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("-s,--set", c.overrides, "Override a config key, e.g. --set mps.chi_max=32");
    cmd->add_flag("--progress", c.progress, "Print one JSON line per evaluation or bench row to stderr");
}

int exit_code(sqmg_status s) {
    switch (s) {
        case SQMG_OK:
            return 0;
        case SQMG_ERR_CONFIG:
        case SQMG_ERR_CAPACITY:
        case SQMG_ERR_NUMERICAL:
            return static_cast<int>(s);
        default:
            return 1;
    }
}

int report_failure(sqmg_status s) {
    std::fprintf(stderr, "sqmg: %s error: %s\n", sqmg_status_name(s), sqmg_last_error());
    return exit_code(s);
}

void print_progress(const char* line, void*) {
    std::fprintf(stderr, "%s\n", line);
    std::fflush(stderr);
}

// Owns a config handle built from --config and --set.
class Config {
   public:
    sqmg_status open(const Common& c) {
        sqmg_status s = c.config_path.empty() ? sqmg_config_default(&h_) : sqmg_config_load(c.config_path.c_str(), &h_);
        for (const auto& o : c.overrides) {
            if (s != SQMG_OK) break;
            s = sqmg_config_set(h_, o.c_str());
        }
        return s;
    }
    ~Config() { sqmg_config_free(h_); }
    const sqmg_config* get() const { return h_; }

   private:
    sqmg_config* h_ = nullptr;
};

int finish(sqmg_status s, char* summary) {
    if (s != SQMG_OK) return report_failure(s);
    if (summary) std::printf("%s\n", summary);
    sqmg_string_free(summary);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Qubit-reuse molecular graph generation: train, generate, bench, decode, report"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(sqmg_version()));

    Common train_opts, gen_opts, dec_opts, bench_opts, cfg_opts;
    std::string resume, params, samples, report_in, report_out = ".";

    auto* train = app.add_subcommand("train", "Optimize ansatz parameters");
    add_common(train, train_opts);
    train->add_option("--resume", resume, "Replay a previous history.jsonl")->check(CLI::ExistingFile);

    auto* gen = app.add_subcommand("generate", "Sample and decode molecules from trained parameters");
    add_common(gen, gen_opts);
    gen->add_option("-p,--params", params, "best_params.json or a JSON array");

    auto* dec = app.add_subcommand("decode", "Decode a stored sample file");
    add_common(dec, dec_opts);
    dec->add_option("samples", samples, "samples.jsonl or samples.bin")->required()->check(CLI::ExistingFile);

    auto* bench = app.add_subcommand("bench", "Time dense and MPS backends over N");
    add_common(bench, bench_opts);

    auto* report = app.add_subcommand("report", "Emit plot-ready CSV from history, molecules or bench files");
    report->add_option("input", report_in, "history.jsonl, molecules.jsonl or bench.csv")
        ->required()
        ->check(CLI::ExistingFile);
    report->add_option("-o,--out", report_out, "Output directory");

    auto* cfg = app.add_subcommand("config", "Print the effective configuration");
    add_common(cfg, cfg_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    char* summary = nullptr;
    auto with_config = [&](const Common& c, auto&& run) {
        Config config;
        if (sqmg_status s = config.open(c); s != SQMG_OK) return report_failure(s);
        const sqmg_status s = run(config.get());
        return finish(s, summary);
    };

    if (*train) {
        return with_config(train_opts, [&](const sqmg_config* c) {
            return sqmg_train(c, resume.empty() ? nullptr : resume.c_str(),
                              train_opts.progress ? print_progress : nullptr, nullptr, &summary);
        });
    }
    if (*gen) {
        return with_config(gen_opts, [&](const sqmg_config* c) {
            return sqmg_generate(c, params.empty() ? nullptr : params.c_str(), &summary);
        });
    }
    if (*dec) {
        return with_config(dec_opts, [&](const sqmg_config* c) { return sqmg_decode(c, samples.c_str(), &summary); });
    }
    if (*bench) {
        return with_config(bench_opts, [&](const sqmg_config* c) {
            return sqmg_bench(c, bench_opts.progress ? print_progress : nullptr, nullptr, &summary);
        });
    }
    if (*report) {
        const sqmg_status s = sqmg_report(report_in.c_str(), report_out.c_str(), &summary);
        return finish(s, summary);
    }
    return with_config(cfg_opts, [&](const sqmg_config* c) { return sqmg_config_to_json(c, &summary); });
}
