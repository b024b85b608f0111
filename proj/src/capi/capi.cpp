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


#include "sqmg/sqmg.h"

#include <cstring>
#include <filesystem>
#include <new>
#include <string>

#include <json.hpp>

#include "sqmg/common/error.hpp"
#include "sqmg/common/io.hpp"
#include "sqmg/molgraph/molecule.hpp"
#include "sqmg/optim/cobyla.hpp"
#include "sqmg/pipeline/pipeline.hpp"

using nlohmann::json;

struct sqmg_config {
    json doc;
    std::string base_dir;
    sqmg::RunConfig config;
};

struct sqmg_samples {
    sqmg::SampleBatch batch;
};

namespace {

thread_local std::string g_last_error;

sqmg_status set_error(sqmg_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

template <typename F>
sqmg_status guarded(F&& body) {
    try {
        body();
        g_last_error.clear();
        return SQMG_OK;
    } catch (const sqmg::Error& e) {
        return set_error(static_cast<sqmg_status>(e.code()), e.what());
    } catch (const json::exception& e) {
        return set_error(SQMG_ERR_FORMAT, e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return set_error(SQMG_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return set_error(SQMG_ERR_CAPACITY, "out of memory");
    } catch (const std::exception& e) {
        return set_error(SQMG_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(SQMG_ERR_INTERNAL, "unknown error");
    }
}

void need(const void* p, const char* what) {
    sqmg::require(p != nullptr, sqmg::ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void put_string(char** out, const std::string& s) {
    if (out) *out = dup_string(s);
}

sqmg_config* new_config(json doc, std::string base_dir) {
    auto cfg = sqmg::config_from_json(doc, base_dir);
    return new sqmg_config{std::move(doc), std::move(base_dir), std::move(cfg)};
}

}  // namespace

extern "C" {

const char* sqmg_version(void) { return SQMG_VERSION; }

const char* sqmg_status_name(sqmg_status status) {
    if (status == SQMG_OK) return "ok";
    return sqmg::error_code_name(static_cast<sqmg::ErrorCode>(status));
}

const char* sqmg_last_error(void) { return g_last_error.c_str(); }

void sqmg_string_free(char* s) { delete[] s; }

sqmg_status sqmg_config_default(sqmg_config** out) {
    return guarded([&] {
        need(out, "out");
        *out = new_config(json::object(), ".");
    });
}

sqmg_status sqmg_config_load(const char* path, sqmg_config** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        json doc;
        try {
            doc = json::parse(sqmg::read_file(path));
        } catch (const json::exception& e) {
            sqmg::fail(sqmg::ErrorCode::kConfig, std::string(path) + ": " + e.what());
        }
        const auto dir = std::filesystem::path(path).parent_path().string();
        *out = new_config(std::move(doc), dir.empty() ? "." : dir);
    });
}

sqmg_status sqmg_config_from_json(const char* json_text, sqmg_config** out) {
    return guarded([&] {
        need(json_text, "json_text");
        need(out, "out");
        json doc;
        try {
            doc = json::parse(json_text);
        } catch (const json::exception& e) {
            sqmg::fail(sqmg::ErrorCode::kConfig, e.what());
        }
        *out = new_config(std::move(doc), ".");
    });
}

sqmg_status sqmg_config_set(sqmg_config* config, const char* assignment) {
    return guarded([&] {
        need(config, "config");
        need(assignment, "assignment");
        json doc = config->doc;
        sqmg::apply_override(doc, assignment);
        sqmg::RunConfig next = sqmg::config_from_json(doc, config->base_dir);
        config->doc = std::move(doc);
        config->config = std::move(next);
    });
}

sqmg_status sqmg_config_to_json(const sqmg_config* config, char** out_json) {
    return guarded([&] {
        need(config, "config");
        need(out_json, "out_json");
        *out_json = dup_string(sqmg::config_to_json(config->config).dump(2));
    });
}

void sqmg_config_free(sqmg_config* config) { delete config; }

uint64_t sqmg_param_count(uint32_t n_atoms) { return sqmg::param_count(n_atoms); }

sqmg_status sqmg_qubit_count(uint32_t n_atoms, const char* variant, uint64_t* out) {
    return guarded([&] {
        need(variant, "variant");
        need(out, "out");
        *out = sqmg::qubit_count(n_atoms, sqmg::parse_variant_name(variant));
    });
}

sqmg_status sqmg_ansatz_param_count(const sqmg_config* config, uint32_t* out) {
    return guarded([&] {
        need(config, "config");
        need(out, "out");
        *out = sqmg::Sampler(config->config).n_params();
    });
}

sqmg_status sqmg_train(const sqmg_config* config, const char* resume_history, sqmg_progress_fn progress,
                       void* user, char** out_summary) {
    return guarded([&] {
        need(config, "config");
        const sqmg::RunConfig& c = config->config;
        std::vector<sqmg::HistoryRow> resume;
        if (resume_history) resume = sqmg::parse_history_jsonl(sqmg::read_file(resume_history));
        sqmg::TrainProgress cb;
        if (progress) {
            cb = [&](const sqmg::HistoryRow& row) {
                std::string line = sqmg::history_jsonl(std::span(&row, 1), c.optimizer);
                line.pop_back();
                progress(line.c_str(), user);
            };
        }
        const sqmg::TrainResult r = sqmg::run_train(c, resume, cb);
        sqmg::write_train_outputs(c, r);
        put_string(out_summary, sqmg::train_summary_json(c, r).dump(2));
    });
}

sqmg_status sqmg_generate(const sqmg_config* config, const char* params_path, char** out_summary) {
    return guarded([&] {
        need(config, "config");
        const sqmg::RunConfig& c = config->config;
        const std::string path = params_path ? params_path : c.params_file;
        sqmg::require(!path.empty(), sqmg::ErrorCode::kConfig,
                      "no parameter file: pass one or set generate.params_file");
        const auto params = sqmg::load_params_file(path);
        const sqmg::GenerateResult r = sqmg::run_generate(c, params);
        sqmg::write_generate_outputs(c, r);
        put_string(out_summary, sqmg::generate_summary_json(c, r).dump(2));
    });
}

sqmg_status sqmg_decode(const sqmg_config* config, const char* samples_path, char** out_summary) {
    return guarded([&] {
        need(config, "config");
        need(samples_path, "samples_path");
        const sqmg::RunConfig& c = config->config;
        const sqmg::GenerateResult r = sqmg::run_decode(c, samples_path);
        sqmg::write_generate_outputs(c, r);
        put_string(out_summary, sqmg::generate_summary_json(c, r).dump(2));
    });
}

sqmg_status sqmg_bench(const sqmg_config* config, sqmg_progress_fn progress, void* user, char** out_summary) {
    return guarded([&] {
        need(config, "config");
        const sqmg::RunConfig& c = config->config;
        sqmg::BenchProgress cb;
        if (progress) {
            cb = [&](const sqmg::BenchRecord& rec) {
                const json j = {{"backend", sqmg::backend_name(rec.backend)},
                                {"variant", sqmg::variant_name(rec.variant)},
                                {"n_atoms", rec.n_atoms},
                                {"qubits", rec.qubits},
                                {"status", rec.status},
                                {"median_s", rec.median_s}};
                progress(j.dump().c_str(), user);
            };
        }
        const auto records = sqmg::run_bench(c, cb);
        sqmg::write_bench_outputs(c, records);
        put_string(out_summary, sqmg::bench_summary_json(records).dump(2));
    });
}

sqmg_status sqmg_report(const char* input_path, const char* output_dir, char** out_paths) {
    return guarded([&] {
        need(input_path, "input_path");
        need(output_dir, "output_dir");
        const auto paths = sqmg::run_report(input_path, output_dir);
        put_string(out_paths, json(paths).dump());
    });
}

sqmg_status sqmg_sample(const sqmg_config* config, const double* params, size_t n_params, uint64_t shots,
                        uint64_t seed, sqmg_samples** out) {
    return guarded([&] {
        need(config, "config");
        need(out, "out");
        if (n_params) need(params, "params");
        const sqmg::Sampler sampler(config->config);
        sqmg::require(n_params == sampler.n_params(), sqmg::ErrorCode::kInvalidArgument,
                      "expected " + std::to_string(sampler.n_params()) + " parameters, got " +
                          std::to_string(n_params));
        auto batch = sampler.sample(std::span(params, n_params), shots, seed);
        *out = new sqmg_samples{std::move(batch)};
    });
}

sqmg_status sqmg_samples_read(const char* path, sqmg_samples** out) {
    return guarded([&] {
        need(path, "path");
        need(out, "out");
        *out = new sqmg_samples{sqmg::read_samples(path)};
    });
}

sqmg_status sqmg_samples_write(const sqmg_samples* samples, const char* path, const char* format) {
    return guarded([&] {
        need(samples, "samples");
        need(path, "path");
        need(format, "format");
        const std::string f = format;
        sqmg::require(f == "jsonl" || f == "binary", sqmg::ErrorCode::kInvalidArgument,
                      "format must be 'jsonl' or 'binary'");
        sqmg::write_samples(path, samples->batch, f == "jsonl" ? sqmg::SampleFormat::kJsonl : sqmg::SampleFormat::kBinary);
    });
}

uint64_t sqmg_samples_shots(const sqmg_samples* samples) { return samples ? samples->batch.n_shots() : 0; }

uint32_t sqmg_samples_n_atoms(const sqmg_samples* samples) { return samples ? samples->batch.n_atoms : 0; }

uint32_t sqmg_samples_record_width(const sqmg_samples* samples) {
    return samples ? samples->batch.record_width() : 0;
}

sqmg_status sqmg_samples_record(const sqmg_samples* samples, uint64_t shot, uint8_t* codes, size_t len) {
    return guarded([&] {
        need(samples, "samples");
        need(codes, "codes");
        const auto& b = samples->batch;
        sqmg::require(shot < b.n_shots(), sqmg::ErrorCode::kInvalidArgument, "shot index out of range");
        sqmg::require(len == b.record_width(), sqmg::ErrorCode::kInvalidArgument,
                      "buffer length must equal the record width " + std::to_string(b.record_width()));
        const auto rec = b.record(shot);
        std::memcpy(codes, rec.data(), rec.size());
    });
}

void sqmg_samples_free(sqmg_samples* samples) { delete samples; }

sqmg_status sqmg_decode_record(const sqmg_config* config, const uint8_t* codes, size_t len, char** out_json) {
    return guarded([&] {
        need(config, "config");
        need(codes, "codes");
        need(out_json, "out_json");
        const sqmg::RunConfig& c = config->config;
        const auto mol = sqmg::decode_shot(std::span(codes, len), c.n_atoms, {}, {}, c.mode);
        *out_json = dup_string(sqmg::molecule_json_line(mol, sqmg::validate(mol, c.valence)));
    });
}

sqmg_status sqmg_canonical_smiles(const char* smiles, char** out_smiles) {
    return guarded([&] {
        need(smiles, "smiles");
        need(out_smiles, "out_smiles");
        *out_smiles = dup_string(sqmg::to_smiles(sqmg::parse_smiles(smiles)).text);
    });
}

sqmg_status sqmg_canonical_key(const char* smiles, char** out_key) {
    return guarded([&] {
        need(smiles, "smiles");
        need(out_key, "out_key");
        *out_key = dup_string(sqmg::canonical_key(sqmg::parse_smiles(smiles)));
    });
}

sqmg_status sqmg_cobyla_minimize(sqmg_objective_fn f, void* user, size_t n, double* x, const double* lower,
                                 const double* upper, double rhobeg, double rhoend, uint32_t maxfun, double* out_f,
                                 uint32_t* out_evals) {
    return guarded([&] {
        need(reinterpret_cast<const void*>(f), "f");
        need(x, "x");
        sqmg::require(n > 0, sqmg::ErrorCode::kInvalidArgument, "dimension must be positive");
        sqmg::require(!lower == !upper, sqmg::ErrorCode::kInvalidArgument, "give both bounds or neither");
        sqmg::CobylaOptions opts;
        opts.rhobeg = rhobeg;
        opts.rhoend = rhoend;
        opts.maxfun = maxfun;
        if (lower) opts.lower.assign(lower, lower + n);
        if (upper) opts.upper.assign(upper, upper + n);
        auto objective = [&](std::span<const double> p) {
            double v = 0.0;
            sqmg::require(f(p.data(), p.size(), &v, user) == 0, sqmg::ErrorCode::kNumerical,
                          "objective callback aborted");
            return v;
        };
        const auto r = sqmg::cobyla_minimize(objective, std::vector<double>(x, x + n), opts);
        std::copy(r.x.begin(), r.x.end(), x);
        if (out_f) *out_f = r.f;
        if (out_evals) *out_evals = r.evaluations;
    });
}

}  // extern "C"
