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


#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "sqmg/common/error.hpp"
#include "sqmg/common/io.hpp"
#include "sqmg/pipeline/pipeline.hpp"

namespace sqmg {

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

BenchRecord bench_point(const RunConfig& base, Backend backend, AnsatzVariant variant, std::uint32_t n) {
    RunConfig c = base;
    c.backend = backend;
    c.variant = variant;
    c.n_atoms = n;
    BenchRecord rec;
    rec.backend = backend;
    rec.variant = variant;
    rec.n_atoms = n;
    rec.qubits = static_cast<std::uint32_t>(qubit_count(n, variant));
    rec.shots = backend == Backend::kDense ? base.bench.dense_shots : base.bench.shots;
    rec.amplitudes = std::ldexp(1.0, static_cast<int>(rec.qubits));
    if (backend == Backend::kDense && rec.qubits > c.max_qubits) {
        rec.status = "capacity_error";
        return rec;
    }
    try {
        Sampler sampler(c);
        const std::vector<double> params = base.bench.params == "zeros"
                                               ? std::vector<double>(sampler.n_params(), 0.0)
                                               : random_params(sampler.n_params(), base.seed);
        for (std::uint32_t r = 0; r < base.bench.repetitions; ++r) {
            TruncationLog log;
            const auto t0 = std::chrono::steady_clock::now();
            sampler.sample(params, rec.shots, base.seed, &log);
            const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
            rec.runs_s.push_back(dt.count());
            if (backend == Backend::kMps) rec.peak_bond_dim = std::max(rec.peak_bond_dim, log.max_bond_dim());
        }
        rec.median_s = median(rec.runs_s);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::kCapacity) throw;
        rec.status = "capacity_error";
        rec.runs_s.clear();
    }
    return rec;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t p = s.find(sep, start);
        out.emplace_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
        if (p == std::string_view::npos) return out;
        start = p + 1;
    }
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    require(!s.empty() && used == s.size(), ErrorCode::kFormat, "bench csv: bad number '" + s + "'");
    return v;
}

}  // namespace

std::vector<BenchRecord> run_bench(const RunConfig& config, const BenchProgress& progress) {
    config.check();
    std::vector<BenchRecord> out;
    auto sweep = [&](Backend backend, const std::vector<std::uint32_t>& ns) {
        for (AnsatzVariant v : config.bench.variants) {
            for (std::uint32_t n : ns) {
                out.push_back(bench_point(config, backend, v, n));
                if (progress) progress(out.back());
            }
        }
    };
    sweep(Backend::kDense, config.bench.dense_n);
    sweep(Backend::kMps, config.bench.mps_n);
    return out;
}

std::string bench_csv(std::span<const BenchRecord> records) {
    std::ostringstream out;
    out.precision(9);
    out << "backend,variant,n_atoms,qubits,shots,status,median_s,runs_s,peak_bond_dim,amplitudes\n";
    for (const BenchRecord& r : records) {
        out << backend_name(r.backend) << ',' << variant_name(r.variant) << ',' << r.n_atoms << ',' << r.qubits
            << ',' << r.shots << ',' << r.status << ',' << r.median_s << ',';
        for (std::size_t i = 0; i < r.runs_s.size(); ++i) out << (i ? ";" : "") << r.runs_s[i];
        out << ',' << r.peak_bond_dim << ',' << r.amplitudes << '\n';
    }
    return out.str();
}

std::vector<BenchRecord> parse_bench_csv(std::string_view text) {
    std::vector<BenchRecord> out;
    auto lines = split(text, '\n');
    require(!lines.empty() && lines[0].rfind("backend,variant,n_atoms", 0) == 0, ErrorCode::kFormat,
            "bench csv: missing header");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = split(lines[i], ',');
        require(f.size() == 10, ErrorCode::kFormat, "bench csv: line " + std::to_string(i + 1) + " has " +
                                                        std::to_string(f.size()) + " fields, expected 10");
        BenchRecord r;
        try {
            r.backend = parse_backend_name(f[0]);
            r.variant = parse_variant_name(f[1]);
        } catch (const Error& e) {
            fail(ErrorCode::kFormat, std::string("bench csv: ") + e.what());
        }
        r.n_atoms = static_cast<std::uint32_t>(to_double(f[2]));
        r.qubits = static_cast<std::uint32_t>(to_double(f[3]));
        r.shots = static_cast<std::uint64_t>(to_double(f[4]));
        r.status = f[5];
        r.median_s = to_double(f[6]);
        if (!f[7].empty()) {
            for (const auto& t : split(f[7], ';')) r.runs_s.push_back(to_double(t));
        }
        r.peak_bond_dim = static_cast<std::uint32_t>(to_double(f[8]));
        r.amplitudes = to_double(f[9]);
        out.push_back(std::move(r));
    }
    return out;
}

void write_bench_outputs(const RunConfig& config, std::span<const BenchRecord> records) {
    const std::filesystem::path dir(config.output_dir);
    std::filesystem::create_directories(dir);
    write_file((dir / "bench.csv").string(), bench_csv(records));
    write_file((dir / "bench_summary.json").string(), bench_summary_json(records).dump(2) + "\n");
}

}  // namespace sqmg
