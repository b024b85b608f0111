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


// Acceptance run: one PASS/FAIL line per criterion with the measured values.
// Exits 0 unless --strict is given and a criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oracles.hpp"
#include "sqmg/ansatz/ansatz.hpp"
#include "sqmg/common/error.hpp"
#include "sqmg/common/io.hpp"
#include "sqmg/common/rng.hpp"
#include "sqmg/molgraph/molecule.hpp"
#include "sqmg/optim/bayesopt.hpp"
#include "sqmg/optim/cobyla.hpp"
#include "sqmg/pipeline/pipeline.hpp"
#include "sqmg/sim/simulate.hpp"

using namespace sqmg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double total(const Distribution& d) {
    double s = 0;
    for (const auto& [k, v] : d) s += v;
    return s;
}

double max_abs_diff(const Distribution& a, const Distribution& b) {
    double m = 0;
    for (const auto& [k, v] : a) m = std::max(m, std::abs(v - (b.count(k) ? b.at(k) : 0.0)));
    for (const auto& [k, v] : b) m = std::max(m, std::abs(v - (a.count(k) ? a.at(k) : 0.0)));
    return m;
}

MpsOptions exact_mps() {
    MpsOptions o;
    o.mps = MpsConfig::exact();
    return o;
}

std::vector<std::uint8_t> record_from_index(std::uint64_t idx, std::uint32_t n) {
    const std::uint32_t pairs = n * (n - 1) / 2;
    std::vector<std::uint8_t> rec(n + pairs);
    for (std::uint32_t i = 0; i < n; ++i, idx >>= 3) rec[i] = idx & 7;
    for (std::uint32_t p = 0; p < pairs; ++p, idx >>= 2) rec[n + p] = idx & 3;
    return rec;
}

struct Context {
    fs::path workdir;
    std::uint64_t dense_shots = 2;
    std::vector<BenchRecord> bench;  // shared by criteria 8 and 9
};

Outcome scaling_table(Context&) {
    struct Row {
        std::uint32_t n;
        std::uint64_t params, hybrid, stat;
    };
    static constexpr Row kTable[] = {{2, 21, 8, 8},         {3, 35, 11, 15},    {4, 51, 14, 24},
                                     {5, 69, 17, 35},        {10, 189, 32, 120}, {20, 479, 62, 440},
                                     {30, 849, 92, 960},     {40, 1959, 122, 1680}};
    int bad = 0;
    std::string miss;
    for (const Row& r : kTable) {
        const auto p = param_count(r.n), h = qubit_count(r.n, AnsatzVariant::kHybrid),
                   s = qubit_count(r.n, AnsatzVariant::kStatic);
        if (p != r.params || h != r.hybrid || s != r.stat) {
            ++bad;
            miss += fmt(" N=%u(params %llu vs table %llu)", r.n, static_cast<unsigned long long>(p),
                        static_cast<unsigned long long>(r.params));
        }
    }
    return {bad == 0, fmt("%d/8 rows match;", 8 - bad) + (bad ? miss : std::string(" all rows exact"))};
}

Outcome oracle_equivalence(Context&) {
    double worst_tv = 0, worst_sum = 0;
    for (std::uint32_t n : {2u, 3u}) {
        const Ansatz a = build_hybrid_ansatz(n);
        for (std::uint64_t v = 1; v <= 10; ++v) {
            const auto p = random_params(param_count(n), 100 * n + v);
            const auto slots = enumerate_distribution(a.circuit, p);
            worst_sum = std::max(worst_sum, std::abs(total(slots) - 1.0));
            const auto exact = record_distribution(slots, n);
            const auto dense = empirical_distribution(run_shots(a, p, 200000, 2 * v));
            const auto mps = empirical_distribution(run_shots_mps(a, p, 200000, 2 * v + 1, exact_mps()).batch);
            worst_tv = std::max({worst_tv, total_variation(exact, dense), total_variation(exact, mps),
                                 total_variation(dense, mps)});
        }
    }
    return {worst_tv <= 0.02 && worst_sum <= 1e-10,
            fmt("max pairwise TV %.4f (limit 0.02), max |sum-1| %.2e over N=2,3 x 10 vectors", worst_tv, worst_sum)};
}

Outcome deferred_measurement(Context&) {
    const Ansatz early = build_hybrid_ansatz(2);
    const Ansatz quantum = build_hybrid_ansatz(2, ModeSpec::de_novo(), Conditioning::kQuantumControlled);
    double worst = 0;
    for (std::uint64_t v = 1; v <= 10; ++v) {
        const auto p = random_params(param_count(2), 300 + v);
        worst = std::max(worst, max_abs_diff(record_distribution(enumerate_distribution(early.circuit, p), 2),
                                             record_distribution(enumerate_distribution(quantum.circuit, p), 2)));
    }
    return {worst < 1e-10, fmt("max probability difference %.2e over 10 vectors", worst)};
}

Outcome reuse_equality(Context&) {
    const auto p = random_params(param_count(3), 401);
    const auto h = empirical_distribution(run_shots(build_hybrid_ansatz(3), p, 200000, 11));
    const auto s = empirical_distribution(run_shots(build_static_ansatz(3), p, 200000, 12));
    const double tv = total_variation(h, s);
    return {tv <= 0.02, fmt("TV %.4f between independent 200k-shot samples (limit 0.02)", tv)};
}

Outcome decoder_validator(Context&) {
    std::uint64_t mismatches = 0, patterns = 0;
    for (std::uint64_t idx = 0; idx < 8 * 8 * 4; ++idx, ++patterns) {
        const auto rec = record_from_index(idx, 2);
        try {
            const auto g = decode_shot(rec, 2);
            const auto want = oracle::judge_record(rec, 2);
            std::set<std::array<std::uint32_t, 3>> got;
            for (const Bond& b : g.bonds) {
                got.insert({std::min(b.a, b.b), std::max(b.a, b.b), static_cast<std::uint32_t>(b.order)});
            }
            const bool same = g.atoms == want.atoms &&
                              got == std::set<std::array<std::uint32_t, 3>>(want.bonds.begin(), want.bonds.end()) &&
                              validate(g).valid == want.valid;
            mismatches += !same;
        } catch (const Error&) {
            ++mismatches;
        }
    }
    Rng rng(5150);
    std::vector<MoleculeGraph> pool;
    std::uint64_t key_breaks = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(8));
        auto g = oracle::random_graph(rng, n, 0.4, 2);
        const auto key = canonical_key(g);
        for (int k = 0; k < 20; ++k) key_breaks += canonical_key(oracle::permuted(g, oracle::random_permutation(n, rng))) != key;
        pool.push_back(std::move(g));
    }
    std::vector<std::string> keys;
    for (const auto& g : pool) keys.push_back(canonical_key(g));
    std::uint64_t oracle_breaks = 0, iso_pairs = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
            const bool iso = oracle::isomorphic(pool[i], pool[j]);
            iso_pairs += iso;
            oracle_breaks += iso != (keys[i] == keys[j]);
        }
    }
    return {mismatches == 0 && key_breaks == 0 && oracle_breaks == 0,
            fmt("N=2 sweep %llu/%llu agree; permuted keys differing %llu/20000; key vs isomorphism "
                "disagreements %llu over %zu pairs (%llu isomorphic)",
                static_cast<unsigned long long>(patterns - mismatches), static_cast<unsigned long long>(patterns),
                static_cast<unsigned long long>(key_breaks), static_cast<unsigned long long>(oracle_breaks),
                pool.size() * (pool.size() - 1) / 2, static_cast<unsigned long long>(iso_pairs))};
}

double branin(std::span<const double> x) {
    const double pi = std::numbers::pi;
    const double b = 5.1 / (4 * pi * pi), c = 5 / pi, t = 1 / (8 * pi);
    return std::pow(x[1] - b * x[0] * x[0] + c * x[0] - 6, 2) + 10 * (1 - t) * std::cos(x[0]) + 10;
}

Outcome optimizers(Context&) {
    CobylaOptions o;
    o.rhobeg = 0.5;
    o.rhoend = 1e-8;
    o.maxfun = 500;
    const auto sphere = cobyla_minimize([](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; },
                                        {1.0, 1.0}, o);
    o.maxfun = 2000;
    const auto rosen = cobyla_minimize(
        [](std::span<const double> x) { return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2); },
        {-1.2, 1.0}, o);
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        BayesOpt bo(Box{{-5.0, 0.0}, {10.0, 15.0}}, seed, 5);
        for (int t = 0; t < 100; ++t) {
            const auto p = bo.ask();
            bo.tell(p.x, -branin(p.x));
        }
        hits += -bo.best()->y - 0.397887 < 0.1;
    }
    const bool ok = sphere.f < 1e-6 && sphere.evaluations <= 500 && rosen.f < 1e-4 && rosen.evaluations <= 2000 &&
                    hits >= 8;
    return {ok, fmt("sphere f=%.2e in %u evals; Rosenbrock f=%.2e in %u evals (limit 1e-4); Branin %d/10 seeds "
                    "within 0.1",
                    sphere.f, sphere.evaluations, rosen.f, rosen.evaluations, hits)};
}

Outcome optimizer_comparison(Context&) {
    std::map<std::string, std::vector<double>> best;
    for (const char* opt : {"bo", "cobyla"}) {
        for (int seed = 1; seed <= 3; ++seed) {
            const RunConfig c = make_config({"n_atoms=4", "shots=1000", "optimizer.budget=150",
                                             std::string("optimizer.name=") + opt, "seed=" + std::to_string(seed)});
            best[opt].push_back(run_train(c).best_y);
        }
    }
    const double bo = median(best["bo"]), cob = median(best["cobyla"]);
    return {bo >= cob && bo >= 0.3,
            fmt("median best BO %.3f (%.3f, %.3f, %.3f) vs COBYLA %.3f (%.3f, %.3f, %.3f)", bo, best["bo"][0],
                best["bo"][1], best["bo"][2], cob, best["cobyla"][0], best["cobyla"][1], best["cobyla"][2])};
}

void run_benchmarks(Context& ctx) {
    if (!ctx.bench.empty()) return;
    RunConfig dense = make_config({"bench.dense_n=[2,3,4,5,6,7,8,10]", "bench.mps_n=[]", "bench.variants=[\"hybrid\"]",
                                   "bench.dense_shots=" + std::to_string(ctx.dense_shots)});
    RunConfig mps = make_config({"bench.dense_n=[]", "bench.mps_n=[8,12,16,20]", "bench.shots=1000",
                                 "mps.chi_max=64"});
    const auto note = [](const BenchRecord& r) {
        std::fprintf(stderr, "  bench %s %s N=%u %s %.4fs\n", r.backend == Backend::kDense ? "dense" : "mps",
                     std::string(variant_name(r.variant)).c_str(), r.n_atoms, r.status.c_str(), r.median_s);
    };
    ctx.bench = run_bench(dense, note);
    for (auto& r : run_bench(mps, note)) ctx.bench.push_back(std::move(r));
    dense.output_dir = (ctx.workdir / "bench").string();
    write_bench_outputs(dense, ctx.bench);
}

Outcome scaling_regime(Context& ctx) {
    run_benchmarks(ctx);
    const auto dense_fit = fit_scaling(ctx.bench, 2, 8);
    const auto mps_fit = fit_scaling(ctx.bench, 8, 20);
    const ScalingFit* d = nullptr;
    const ScalingFit* m = nullptr;
    for (const auto& f : dense_fit) {
        if (f.backend == Backend::kDense && f.variant == AnsatzVariant::kHybrid) d = &f;
    }
    for (const auto& f : mps_fit) {
        if (f.backend == Backend::kMps && f.variant == AnsatzVariant::kHybrid) m = &f;
    }
    bool capacity = false, mps20 = true;
    double mps20_s = 0;
    for (const auto& r : ctx.bench) {
        if (r.backend == Backend::kDense && r.n_atoms == 10) capacity = r.status == "capacity_error";
        if (r.backend == Backend::kMps && r.n_atoms == 20) {
            mps20 = mps20 && r.status == "ok" && r.median_s < 1800;
            mps20_s = std::max(mps20_s, r.median_s);
        }
    }
    if (!d || !m) return {false, "missing fit"};
    const double factor = d->factor_per_atom();
    return {factor >= 5 && factor <= 12 && m->slope < d->slope && capacity && mps20,
            fmt("dense factor/atom %.2f (N=2..8, %llu shots/point); MPS slope %.3f vs dense %.3f; dense N=10 %s; "
                "MPS N=20 1000 shots %.2fs",
                factor, static_cast<unsigned long long>(ctx.dense_shots), m->slope, d->slope,
                capacity ? "capacity error" : "no capacity error", mps20_s)};
}

Outcome reuse_trend(Context& ctx) {
    run_benchmarks(ctx);
    std::string detail;
    bool ok = true;
    int seen = 0;
    for (const auto& r : reuse_ratios(ctx.bench)) {
        if (r.n_atoms != 16 && r.n_atoms != 20) continue;
        ++seen;
        ok = ok && r.static_s <= r.hybrid_s;
        detail += fmt("N=%u static/hybrid %.3f (%.3fs / %.3fs); ", r.n_atoms, r.static_over_hybrid(), r.static_s,
                      r.hybrid_s);
    }
    return {ok && seen == 2, detail.empty() ? "no MPS ratios" : detail.substr(0, detail.size() - 2)};
}

std::map<std::string, std::string> run_outputs(const fs::path& dir) {
    fs::remove_all(dir);
    RunConfig c = make_config({"n_atoms=3", "shots=300", "optimizer.budget=12", "optimizer.bo.n_initial=4",
                               "seed=21", "output.write_samples=true", "output.dir=" + dir.string()});
    const auto train = run_train(c);
    write_train_outputs(c, train);
    const auto gen = run_generate(c, train.best_x);
    write_generate_outputs(c, gen);
    run_report((dir / "history.jsonl").string(), (dir / "report").string());
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file() || e.path().filename() == "history.timing.jsonl") continue;
        files[fs::relative(e.path(), dir).string()] = read_file(e.path().string());
    }
    return files;
}

Outcome determinism(Context& ctx) {
    const auto a = run_outputs(ctx.workdir / "det_a");
    const auto b = run_outputs(ctx.workdir / "det_b");
    std::size_t same = 0;
    for (const auto& [name, text] : a) same += b.count(name) && b.at(name) == text;
    return {a.size() == b.size() && same == a.size() && a.size() >= 5,
            fmt("%zu/%zu output files byte-identical across re-runs", same, a.size())};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SQMG acceptance run"};
    bool strict = false;
    std::vector<int> only;
    Context ctx;
    std::string workdir = (fs::temp_directory_path() / "sqmg_acceptance").string();
    app.add_flag("--strict", strict, "Exit non-zero when any criterion fails");
    app.add_option("--only", only, "Run only these criteria")->delimiter(',');
    app.add_option("--workdir", workdir, "Scratch directory");
    app.add_option("--dense-shots", ctx.dense_shots, "Shots per dense benchmark point");
    std::string report_path;
    app.add_option("--report", report_path, "Also write the result lines here (default <workdir>/acceptance.txt)");
    CLI11_PARSE(app, argc, argv);
    ctx.workdir = workdir;
    fs::create_directories(ctx.workdir);
    if (report_path.empty()) report_path = (ctx.workdir / "acceptance.txt").string();
    std::string report;

    const std::vector<std::pair<std::string, std::function<Outcome(Context&)>>> criteria = {
        {"scaling formulas", scaling_table},
        {"oracle equivalence", oracle_equivalence},
        {"deferred measurement", deferred_measurement},
        {"hybrid/static equality", reuse_equality},
        {"decoder and validator", decoder_validator},
        {"optimizer correctness", optimizers},
        {"optimizer comparison", optimizer_comparison},
        {"scaling regime", scaling_regime},
        {"reuse trend", reuse_trend},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second(ctx);
        } catch (const std::exception& e) {
            out = {false, std::string("error: ") + e.what()};
        }
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        failed += !out.pass;
        const std::string line = fmt("%s %2d %s: ", out.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str()) +
                                 out.detail + fmt(" [%.1fs]\n", dt.count());
        std::fputs(line.c_str(), stdout);
        std::fflush(stdout);
        report += line;
        write_file(report_path, report);
    }
    report += fmt("%d criteria failed\n", failed);
    write_file(report_path, report);
    std::fputs(report.substr(report.rfind('\n', report.size() - 2) + 1).c_str(), stdout);
    return strict && failed ? 1 : 0;
}
