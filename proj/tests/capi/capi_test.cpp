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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sqmg/sqmg.h"

namespace {

struct Str {
    char* p = nullptr;
    ~Str() { sqmg_string_free(p); }
    std::string s() const { return p ? p : ""; }
};

struct Cfg {
    sqmg_config* h = nullptr;
    ~Cfg() { sqmg_config_free(h); }
};

std::string temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("sqmg_capi_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int quadratic(const double* x, size_t n, double* f, void*) {
    *f = 0;
    for (size_t i = 0; i < n; ++i) *f += (x[i] - 1.0 * i) * (x[i] - 1.0 * i);
    return 0;
}

int aborting(const double*, size_t, double* f, void*) {
    *f = 0;
    return 1;
}

void count_lines(const char*, void* user) { ++*static_cast<int*>(user); }

}  // namespace

TEST_CASE("version and status names") {
    CHECK(std::strlen(sqmg_version()) > 0);
    CHECK(std::string(sqmg_status_name(SQMG_OK)) == "ok");
    CHECK(std::string(sqmg_status_name(SQMG_ERR_CAPACITY)) == "capacity");
    CHECK(std::string(sqmg_last_error()).empty());
}

TEST_CASE("scaling helpers") {
    CHECK(sqmg_param_count(2) == 21);
    CHECK(sqmg_param_count(40) == 1959);
    uint64_t q = 0;
    CHECK(sqmg_qubit_count(3, "hybrid", &q) == SQMG_OK);
    CHECK(q == 11);
    CHECK(sqmg_qubit_count(20, "static", &q) == SQMG_OK);
    CHECK(q == 440);
    CHECK(sqmg_qubit_count(3, "dynamic", &q) == SQMG_ERR_INVALID_ARGUMENT);
    CHECK(std::string(sqmg_last_error()).find("dynamic") != std::string::npos);
    CHECK(sqmg_qubit_count(3, nullptr, &q) == SQMG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("config handle") {
    Cfg c;
    REQUIRE(sqmg_config_default(&c.h) == SQMG_OK);
    CHECK(sqmg_config_set(c.h, "n_atoms=3") == SQMG_OK);
    CHECK(sqmg_config_set(c.h, "no.such.key=1") == SQMG_ERR_CONFIG);
    CHECK(sqmg_config_set(c.h, "shots=0") == SQMG_ERR_CONFIG);
    uint32_t n = 0;
    CHECK(sqmg_ansatz_param_count(c.h, &n) == SQMG_OK);
    CHECK(n == 35);
    Str j;
    CHECK(sqmg_config_to_json(c.h, &j.p) == SQMG_OK);
    CHECK(j.s().find("\"n_atoms\": 3") != std::string::npos);
    CHECK(j.s().find("\"shots\": 1000") != std::string::npos);
    Cfg d;
    CHECK(sqmg_config_from_json(j.p, &d.h) == SQMG_OK);
    CHECK(sqmg_config_from_json("{oops", &d.h) == SQMG_ERR_CONFIG);
    Cfg e;
    CHECK(sqmg_config_load("/nonexistent/sqmg.json", &e.h) != SQMG_OK);
    CHECK(e.h == nullptr);
    CHECK(sqmg_config_set(nullptr, "n_atoms=2") == SQMG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("dense capacity surfaces as a status") {
    Cfg c;
    REQUIRE(sqmg_config_default(&c.h) == SQMG_OK);
    CHECK(sqmg_config_set(c.h, "n_atoms=10") == SQMG_OK);
    CHECK(sqmg_config_set(c.h, "backend=dense") == SQMG_ERR_CAPACITY);
    CHECK(std::string(sqmg_last_error()).find("backend=mps") != std::string::npos);
}

TEST_CASE("sampling, records and sample files") {
    Cfg c;
    REQUIRE(sqmg_config_default(&c.h) == SQMG_OK);
    REQUIRE(sqmg_config_set(c.h, "n_atoms=3") == SQMG_OK);
    std::vector<double> p(35, 1.1);
    sqmg_samples* s = nullptr;
    REQUIRE(sqmg_sample(c.h, p.data(), p.size(), 64, 5, &s) == SQMG_OK);
    CHECK(sqmg_samples_shots(s) == 64);
    CHECK(sqmg_samples_n_atoms(s) == 3);
    CHECK(sqmg_samples_record_width(s) == 6);
    std::vector<uint8_t> rec(6);
    CHECK(sqmg_samples_record(s, 0, rec.data(), rec.size()) == SQMG_OK);
    CHECK(sqmg_samples_record(s, 64, rec.data(), rec.size()) == SQMG_ERR_INVALID_ARGUMENT);
    CHECK(sqmg_samples_record(s, 0, rec.data(), 5) == SQMG_ERR_INVALID_ARGUMENT);
    Str line;
    CHECK(sqmg_decode_record(c.h, rec.data(), rec.size(), &line.p) == SQMG_OK);
    CHECK(line.s().find("\"valid\"") != std::string::npos);

    const std::string dir = temp_dir("samples");
    for (const char* fmt : {"jsonl", "binary"}) {
        const std::string path = dir + "/s." + fmt;
        CHECK(sqmg_samples_write(s, path.c_str(), fmt) == SQMG_OK);
        sqmg_samples* back = nullptr;
        REQUIRE(sqmg_samples_read(path.c_str(), &back) == SQMG_OK);
        std::vector<uint8_t> a(6), b(6);
        for (uint64_t k = 0; k < 64; ++k) {
            sqmg_samples_record(s, k, a.data(), 6);
            sqmg_samples_record(back, k, b.data(), 6);
            CHECK(a == b);
        }
        sqmg_samples_free(back);
    }
    CHECK(sqmg_samples_write(s, (dir + "/x").c_str(), "xml") == SQMG_ERR_INVALID_ARGUMENT);
    sqmg_samples_free(s);
    CHECK(sqmg_sample(c.h, p.data(), 3, 10, 1, &s) == SQMG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("canonical SMILES and keys") {
    Str a, b, k1, k2;
    CHECK(sqmg_canonical_smiles("O=C", &a.p) == SQMG_OK);
    CHECK(a.s() == "C=O");
    CHECK(sqmg_canonical_smiles("C1CCCCC1", &b.p) == SQMG_OK);
    CHECK(b.s() == "C1CCCCC1");
    CHECK(sqmg_canonical_key("OCC", &k1.p) == SQMG_OK);
    CHECK(sqmg_canonical_key("CCO", &k2.p) == SQMG_OK);
    CHECK(k1.s() == k2.s());
    Str bad;
    CHECK(sqmg_canonical_smiles("C(", &bad.p) == SQMG_ERR_FORMAT);
}

TEST_CASE("cobyla through the C API") {
    double x[3] = {5, 5, 5};
    double f = -1;
    uint32_t evals = 0;
    REQUIRE(sqmg_cobyla_minimize(quadratic, nullptr, 3, x, nullptr, nullptr, 0.5, 1e-8, 2000, &f, &evals) == SQMG_OK);
    CHECK(f < 1e-10);
    CHECK(std::abs(x[2] - 2.0) < 1e-4);
    CHECK(evals > 0);
    const double lo[2] = {0.5, 0.5}, hi[2] = {3, 3};
    double y[2] = {2, 2};
    REQUIRE(sqmg_cobyla_minimize(quadratic, nullptr, 2, y, lo, hi, 0.5, 1e-8, 2000, &f, &evals) == SQMG_OK);
    CHECK(std::abs(y[0] - 0.5) < 1e-6);
    CHECK(std::abs(y[1] - 1.0) < 1e-4);
    CHECK(sqmg_cobyla_minimize(aborting, nullptr, 2, y, nullptr, nullptr, 0.5, 1e-8, 100, &f, &evals) == SQMG_ERR_NUMERICAL);
    CHECK(sqmg_cobyla_minimize(quadratic, nullptr, 2, y, lo, nullptr, 0.5, 1e-8, 100, &f, &evals) == SQMG_ERR_INVALID_ARGUMENT);
}

TEST_CASE("train, generate, decode and report write their files") {
    const std::string dir = temp_dir("pipeline");
    Cfg c;
    REQUIRE(sqmg_config_default(&c.h) == SQMG_OK);
    for (const std::string& a : std::vector<std::string>{"n_atoms=2", "shots=100", "optimizer.budget=6", "optimizer.bo.n_initial=3",
                                "optimizer.bo.candidates=64", "output.write_samples=true", "output.dir=" + dir}) {
        REQUIRE(sqmg_config_set(c.h, a.c_str()) == SQMG_OK);
    }
    int rows = 0;
    Str ts;
    REQUIRE(sqmg_train(c.h, nullptr, count_lines, &rows, &ts.p) == SQMG_OK);
    CHECK(rows == 6);
    CHECK(ts.s().find("best_objective") != std::string::npos);
    const std::string history = slurp(dir + "/history.jsonl");
    Str resumed;
    REQUIRE(sqmg_train(c.h, (dir + "/history.jsonl").c_str(), nullptr, nullptr, &resumed.p) == SQMG_OK);
    CHECK(resumed.s().find("\"replayed\": 6") != std::string::npos);
    CHECK(slurp(dir + "/history.jsonl") == history);

    Str gs;
    REQUIRE(sqmg_generate(c.h, (dir + "/best_params.json").c_str(), &gs.p) == SQMG_OK);
    CHECK(gs.s().find("\"validity\"") != std::string::npos);
    const std::string molecules = slurp(dir + "/molecules.jsonl");
    Str ds;
    REQUIRE(sqmg_decode(c.h, (dir + "/samples.jsonl").c_str(), &ds.p) == SQMG_OK);
    CHECK(slurp(dir + "/molecules.jsonl") == molecules);
    Str paths;
    REQUIRE(sqmg_report((dir + "/history.jsonl").c_str(), (dir + "/report").c_str(), &paths.p) == SQMG_OK);
    CHECK(paths.s().find("trajectory.csv") != std::string::npos);
    Str none;
    CHECK(sqmg_generate(c.h, nullptr, &none.p) == SQMG_ERR_CONFIG);
    CHECK(sqmg_decode(c.h, (dir + "/missing.jsonl").c_str(), &none.p) == SQMG_ERR_IO);
}

TEST_CASE("bench through the C API") {
    const std::string dir = temp_dir("bench");
    Cfg c;
    REQUIRE(sqmg_config_default(&c.h) == SQMG_OK);
    for (const std::string& a : std::vector<std::string>{"bench.dense_n=[2,3]", "bench.mps_n=[3]", "bench.shots=4", "bench.dense_shots=4",
                                "bench.repetitions=1", "output.dir=" + dir}) {
        REQUIRE(sqmg_config_set(c.h, a.c_str()) == SQMG_OK);
    }
    int rows = 0;
    Str s;
    REQUIRE(sqmg_bench(c.h, count_lines, &rows, &s.p) == SQMG_OK);
    CHECK(rows == 6);
    CHECK(slurp(dir + "/bench.csv").rfind("backend,variant,n_atoms", 0) == 0);
}
