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

#include "sqmg/pipeline/config.hpp"

#include <filesystem>

#include "sqmg/common/error.hpp"
#include "sqmg/common/io.hpp"

namespace sqmg {

using nlohmann::json;

std::string_view backend_name(Backend b) { return b == Backend::kDense ? "dense" : "mps"; }

Backend parse_backend_name(std::string_view name) {
    if (name == "dense") return Backend::kDense;
    if (name == "mps") return Backend::kMps;
    fail(ErrorCode::kConfig, "unknown backend '" + std::string(name) + "' (dense, mps)");
}

std::string_view optimizer_name(OptimizerKind o) { return o == OptimizerKind::kCobyla ? "cobyla" : "bo"; }

OptimizerKind parse_optimizer_name(std::string_view name) {
    if (name == "cobyla") return OptimizerKind::kCobyla;
    if (name == "bo") return OptimizerKind::kBo;
    fail(ErrorCode::kConfig, "unknown optimizer '" + std::string(name) + "' (cobyla, bo)");
}

DenseOptions RunConfig::dense_options() const {
    DenseOptions o;
    o.max_qubits = max_qubits;
    o.threads = threads;
    return o;
}

MpsOptions RunConfig::mps_options() const {
    MpsOptions o;
    o.mps.chi_max = chi_max;
    o.mps.threshold = threshold;
    o.mps.memory_budget_bytes = memory_budget_mb << 20;
    o.threads = threads;
    return o;
}

void RunConfig::check() const {
    auto bad = [](const std::string& what) { fail(ErrorCode::kConfig, what); };
    if (n_atoms < 1) bad("n_atoms must be at least 1");
    if (shots < 1) bad("shots must be at least 1");
    if (threads < 1) bad("threads must be at least 1");
    if (chi_max < 1) bad("mps.chi_max must be at least 1");
    if (!(threshold >= 0.0 && threshold < 1.0)) bad("mps.threshold must lie in [0, 1)");
    if (!(rhobeg > rhoend && rhoend > 0)) bad("optimizer.cobyla needs rhobeg > rhoend > 0");
    if (bo_candidates < 1) bad("optimizer.bo.candidates must be at least 1");
    if (!(bo_local_fraction >= 0.0 && bo_local_fraction <= 1.0)) bad("optimizer.bo.local_fraction must lie in [0, 1]");
    if (!(bo_local_width > 0.0)) bad("optimizer.bo.local_width must be positive");
    if (bench.repetitions < 1) bad("bench.repetitions must be at least 1");
    if (bench.params != "zeros" && bench.params != "random") bad("bench.params must be 'zeros' or 'random'");
    valence.check();
    try {
        mode.check(n_atoms);
    } catch (const Error& e) {
        bad(std::string("mode: ") + e.what());
    }
    check_fragment_valence(mode, valence);
    if (conditioning == Conditioning::kQuantumControlled && backend == Backend::kMps) {
        bad("quantum_controlled conditioning needs the dense backend");
    }
    if (backend == Backend::kDense) {
        const auto q = qubit_count(n_atoms, variant);
        if (q > max_qubits) {
            fail(ErrorCode::kCapacity, "dense backend cannot hold N=" + std::to_string(n_atoms) + " (" +
                                           std::to_string(q) + " qubits, 2^" + std::to_string(q) +
                                           " amplitudes) under the " + std::to_string(max_qubits) +
                                           "-qubit cap; use backend=mps");
        }
    }
}

json default_config_json() {
    return json{
        {"config_version", kConfigVersion},
        {"n_atoms", 2},
        {"variant", "hybrid"},
        {"conditioning", "early_measured"},
        {"backend", "mps"},
        {"dense", {{"max_qubits", 30}}},
        {"mps", {{"chi_max", 64}, {"threshold", 1e-12}, {"memory_budget_mb", 2048}}},
        {"threads", 1},
        {"shots", 1000},
        {"seed", 1},
        {"optimizer",
         {{"name", "bo"},
          {"budget", 150},
          {"cobyla", {{"rhobeg", 1.0}, {"rhoend", 1e-3}}},
          {"bo", {{"n_initial", 10}, {"xi", 0.01}, {"candidates", 4096}, {"polish_steps", 16}, {"local_fraction", 0.9}, {"local_width", 2.0}}}}},
        {"mode", {{"name", "de_novo"}, {"fragment_file", ""}, {"fragment", nullptr}}},
        {"valence", {{"C", 4}, {"O", 2}, {"N", 3}, {"S", 6}, {"P", 5}, {"F", 1}, {"Cl", 1}}},
        {"output", {{"dir", "out"}, {"sample_format", "jsonl"}, {"write_samples", false}}},
        {"generate", {{"params_file", ""}}},
        {"bench",
         {{"dense_n", {2, 3, 4, 5, 6, 7, 8, 10}},
          {"mps_n", {8, 12, 16, 20}},
          {"variants", {"hybrid", "static"}},
          {"shots", 1000},
          {"dense_shots", 1000},
          {"repetitions", 3},
          {"params", "random"}}},
    };
}

namespace {

// Objects whose contents are free-form.
bool opaque_path(const std::string& path) { return path == "mode.fragment"; }

void merge_checked(json& base, const json& user, const std::string& path) {
    for (auto it = user.begin(); it != user.end(); ++it) {
        const std::string key = path.empty() ? it.key() : path + "." + it.key();
        if (!base.contains(it.key())) fail(ErrorCode::kConfig, "unknown config key '" + key + "'");
        json& slot = base[it.key()];
        if (slot.is_object() && !opaque_path(key)) {
            if (!it->is_object()) fail(ErrorCode::kConfig, "config key '" + key + "' must be an object");
            merge_checked(slot, *it, key);
        } else {
            slot = *it;
        }
    }
}

json parse_value(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::exception&) {
        return json(std::string(text));
    }
}

ModeSpec resolve_mode(const json& m, const std::string& base_dir, std::string& fragment_file) {
    const auto name = m.at("name").get<std::string>();
    fragment_file = m.at("fragment_file").get<std::string>();
    ModeSpec spec;
    if (!fragment_file.empty()) {
        std::filesystem::path p(fragment_file);
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        spec = load_fragment_file(p.string());
    } else if (!m.at("fragment").is_null()) {
        spec = parse_fragment_spec(m.at("fragment").dump());
    }
    try {
        spec.mode = parse_mode_name(name == "scaffold_decoration" ? "scaffold" : name);
    } catch (const Error& e) {
        fail(ErrorCode::kConfig, e.what());
    }
    return spec;
}

}  // namespace

json config_to_json(const RunConfig& c) {
    json j = default_config_json();
    j["n_atoms"] = c.n_atoms;
    j["variant"] = variant_name(c.variant);
    j["conditioning"] = conditioning_name(c.conditioning);
    j["backend"] = backend_name(c.backend);
    j["dense"]["max_qubits"] = c.max_qubits;
    j["mps"] = {{"chi_max", c.chi_max}, {"threshold", c.threshold}, {"memory_budget_mb", c.memory_budget_mb}};
    j["threads"] = c.threads;
    j["shots"] = c.shots;
    j["seed"] = c.seed;
    j["optimizer"] = {{"name", optimizer_name(c.optimizer)},
                      {"budget", c.budget},
                      {"cobyla", {{"rhobeg", c.rhobeg}, {"rhoend", c.rhoend}}},
                      {"bo",
                       {{"n_initial", c.bo_initial},
                        {"xi", c.bo_xi},
                        {"candidates", c.bo_candidates},
                        {"polish_steps", c.bo_polish_steps},
                        {"local_fraction", c.bo_local_fraction},
                        {"local_width", c.bo_local_width}}}};
    json fragment = nullptr;
    if (c.mode.mode != GenerationMode::kDeNovo) {
        fragment = {{"atoms", json::array()}, {"bonds", json::array()}};
        for (const auto& [site, kind] : c.mode.fixed_atoms) fragment["atoms"].push_back({site, atom_symbol(kind)});
        for (const auto& [pair, kind] : c.mode.fixed_bonds) {
            fragment["bonds"].push_back({pair.first, pair.second, bond_name(kind)});
        }
    }
    j["mode"] = {{"name", mode_name(c.mode.mode)}, {"fragment_file", ""}, {"fragment", fragment}};
    for (AtomKind k : kElements) j["valence"][std::string(atom_symbol(k))] = c.valence.of(k);
    j["output"] = {{"dir", c.output_dir},
                   {"sample_format", c.sample_format == SampleFormat::kBinary ? "binary" : "jsonl"},
                   {"write_samples", c.write_samples}};
    j["generate"]["params_file"] = c.params_file;
    json variants = json::array();
    for (auto v : c.bench.variants) variants.push_back(variant_name(v));
    j["bench"] = {{"dense_n", c.bench.dense_n},   {"mps_n", c.bench.mps_n},
                  {"variants", variants},         {"shots", c.bench.shots},
                  {"dense_shots", c.bench.dense_shots}, {"repetitions", c.bench.repetitions},
                  {"params", c.bench.params}};
    return j;
}

RunConfig config_from_json(const json& user, const std::string& base_dir) {
    if (!user.is_object()) fail(ErrorCode::kConfig, "config must be a JSON object");
    json j = default_config_json();
    merge_checked(j, user, "");
    RunConfig c;
    try {
        if (j.at("config_version").get<int>() != kConfigVersion) {
            fail(ErrorCode::kConfig, "unsupported config_version " + j.at("config_version").dump());
        }
        c.n_atoms = j.at("n_atoms").get<std::uint32_t>();
        c.variant = parse_variant_name(j.at("variant").get<std::string>());
        c.conditioning = parse_conditioning_name(j.at("conditioning").get<std::string>());
        c.backend = parse_backend_name(j.at("backend").get<std::string>());
        c.max_qubits = j.at("dense").at("max_qubits").get<std::uint32_t>();
        const json& mps = j.at("mps");
        if (mps.at("chi_max").is_string()) {
            if (mps.at("chi_max") != "exact") fail(ErrorCode::kConfig, "mps.chi_max must be a number or \"exact\"");
            c.chi_max = MpsConfig::exact().chi_max;
            c.threshold = 0.0;
        } else {
            c.chi_max = mps.at("chi_max").get<std::uint32_t>();
            c.threshold = mps.at("threshold").get<double>();
        }
        c.memory_budget_mb = mps.at("memory_budget_mb").get<std::uint64_t>();
        c.threads = j.at("threads").get<unsigned>();
        c.shots = j.at("shots").get<std::uint64_t>();
        c.seed = j.at("seed").get<std::uint64_t>();
        const json& opt = j.at("optimizer");
        c.optimizer = parse_optimizer_name(opt.at("name").get<std::string>());
        c.budget = opt.at("budget").get<std::uint32_t>();
        c.rhobeg = opt.at("cobyla").at("rhobeg").get<double>();
        c.rhoend = opt.at("cobyla").at("rhoend").get<double>();
        c.bo_initial = opt.at("bo").at("n_initial").get<std::uint32_t>();
        c.bo_xi = opt.at("bo").at("xi").get<double>();
        c.bo_candidates = opt.at("bo").at("candidates").get<std::uint32_t>();
        c.bo_polish_steps = opt.at("bo").at("polish_steps").get<std::uint32_t>();
        c.bo_local_fraction = opt.at("bo").at("local_fraction").get<double>();
        c.bo_local_width = opt.at("bo").at("local_width").get<double>();
        c.mode = resolve_mode(j.at("mode"), base_dir, c.fragment_file);
        for (AtomKind k : kElements) c.valence.set(k, j.at("valence").at(std::string(atom_symbol(k))).get<int>());
        const json& out = j.at("output");
        c.output_dir = out.at("dir").get<std::string>();
        const auto fmt = out.at("sample_format").get<std::string>();
        if (fmt != "jsonl" && fmt != "binary") fail(ErrorCode::kConfig, "output.sample_format must be jsonl or binary");
        c.sample_format = fmt == "binary" ? SampleFormat::kBinary : SampleFormat::kJsonl;
        c.write_samples = out.at("write_samples").get<bool>();
        c.params_file = j.at("generate").at("params_file").get<std::string>();
        const json& b = j.at("bench");
        c.bench.dense_n = b.at("dense_n").get<std::vector<std::uint32_t>>();
        c.bench.mps_n = b.at("mps_n").get<std::vector<std::uint32_t>>();
        c.bench.variants.clear();
        for (const auto& v : b.at("variants")) c.bench.variants.push_back(parse_variant_name(v.get<std::string>()));
        c.bench.shots = b.at("shots").get<std::uint64_t>();
        c.bench.dense_shots = b.at("dense_shots").get<std::uint64_t>();
        c.bench.repetitions = b.at("repetitions").get<std::uint32_t>();
        c.bench.params = b.at("params").get<std::string>();
    } catch (const json::exception& e) {
        fail(ErrorCode::kConfig, std::string("config: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::kConfig) throw;
        fail(ErrorCode::kConfig, std::string("config: ") + e.what());
    }
    c.check();
    return c;
}

void apply_override(json& j, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        fail(ErrorCode::kConfig, "override '" + std::string(assignment) + "' is not key=value");
    }
    const std::string path(assignment.substr(0, eq));
    json full = default_config_json();
    merge_checked(full, j, "");
    json* node = &j;
    const json* schema = &full;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (!schema->is_object() || !schema->contains(key)) {
            fail(ErrorCode::kConfig, "unknown config key '" + path + "'");
        }
        schema = &(*schema)[key];
        if (dot == std::string::npos) {
            (*node)[key] = parse_value(assignment.substr(eq + 1));
            return;
        }
        if (!node->contains(key)) (*node)[key] = json::object();
        node = &(*node)[key];
        start = dot + 1;
    }
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        fail(ErrorCode::kConfig, path + ": " + e.what());
    } catch (const Error& e) {
        fail(ErrorCode::kConfig, e.what());
    }
    for (const auto& o : overrides) apply_override(j, o);
    const auto dir = std::filesystem::path(path).parent_path().string();
    return config_from_json(j, dir.empty() ? "." : dir);
}

RunConfig make_config(const std::vector<std::string>& overrides) {
    json j = json::object();
    for (const auto& o : overrides) apply_override(j, o);
    return config_from_json(j, ".");
}

}  // namespace sqmg
