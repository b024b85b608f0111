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
#include <set>

#include <doctest.h>
#include <json.hpp>

#include "oracles.hpp"
#include "sqmg/common/error.hpp"
#include "sqmg/molgraph/molecule.hpp"

using namespace sqmg;

namespace {

MoleculeGraph chain(std::vector<AtomKind> atoms, std::vector<Bond> bonds) {
    MoleculeGraph g;
    g.atoms = std::move(atoms);
    g.bonds = std::move(bonds);
    return g;
}

std::vector<std::uint8_t> decode_index(std::uint64_t idx, std::uint32_t n) {
    const std::uint32_t pairs = n * (n - 1) / 2;
    std::vector<std::uint8_t> rec(n + pairs);
    for (std::uint32_t i = 0; i < n; ++i, idx >>= 3) rec[i] = idx & 7;
    for (std::uint32_t p = 0; p < pairs; ++p, idx >>= 2) rec[n + p] = idx & 3;
    return rec;
}

constexpr AtomKind C = AtomKind::kC, O = AtomKind::kO, N = AtomKind::kN, F = AtomKind::kF;

}  // namespace

TEST_CASE("decode: codes (001, 001), bond 01 -> C-C single") {
    const std::vector<std::uint8_t> rec{1, 1, 1};
    const auto g = decode_shot(rec, 2);
    CHECK(g.atoms == std::vector<AtomKind>{C, C});
    REQUIRE(g.bonds.size() == 1);
    CHECK(g.bonds[0] == Bond{0, 1, 1});
    CHECK(validate(g).valid);
    CHECK(to_smiles(g).text == "CC");
}

TEST_CASE("decode and validate agree with the direct reading on every N=2 record") {
    for (std::uint64_t idx = 0; idx < 8 * 8 * 4; ++idx) {
        const auto rec = decode_index(idx, 2);
        const auto g = decode_shot(rec, 2);
        const auto r = validate(g);
        const auto want = oracle::judge_record(rec, 2);
        CAPTURE(idx);
        CHECK(g.atoms == want.atoms);
        std::set<std::array<std::uint32_t, 3>> got;
        for (const Bond& b : g.bonds) got.insert({std::min(b.a, b.b), std::max(b.a, b.b), static_cast<std::uint32_t>(b.order)});
        CHECK(got == std::set<std::array<std::uint32_t, 3>>(want.bonds.begin(), want.bonds.end()));
        CHECK(r.valid == want.valid);
        bool empty = false, disc = false;
        std::vector<std::uint32_t> over;
        for (const Failure& f : r.failures) {
            empty |= f.kind == FailureKind::kEmptyMolecule;
            disc |= f.kind == FailureKind::kDisconnected;
            if (f.kind == FailureKind::kValenceExceeded) over.push_back(f.atom);
        }
        CHECK(empty == want.empty);
        CHECK(disc == want.disconnected);
        CHECK(over == want.over_valence);
    }
}

TEST_CASE("decode and validate agree with the direct reading on random N=4 records") {
    Rng rng(31);
    for (int t = 0; t < 20000; ++t) {
        const auto rec = decode_index(rng.next_u64() & ((std::uint64_t{1} << 24) - 1), 4);
        const auto want = oracle::judge_record(rec, 4);
        CHECK(validate(decode_shot(rec, 4)).valid == want.valid);
    }
}

TEST_CASE("decode rejects a record of the wrong length") {
    const std::vector<std::uint8_t> rec{1, 1};
    CHECK_THROWS_AS(decode_shot(rec, 2), Error);
}

TEST_CASE("validation examples") {
    CHECK(validate(chain({O, C, O}, {{0, 1, 2}, {1, 2, 2}})).valid);
    const auto five = chain({C, F, F, F, F, F}, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {0, 4, 1}, {0, 5, 1}});
    const auto r = validate(five);
    CHECK_FALSE(r.valid);
    REQUIRE(r.failures.size() == 1);
    CHECK(failure_text(r.failures[0]) == "valence_exceeded:0");
    const auto split = validate(chain({C, C}, {}));
    CHECK_FALSE(split.valid);
    CHECK(failure_text(split.failures[0]) == "disconnected");
    const auto none = validate(MoleculeGraph{});
    CHECK(failure_text(none.failures[0]) == "empty");
    CHECK(validate(chain({C}, {})).valid);
    ValenceTable hyper;
    hyper.set(C, 5);
    CHECK_FALSE(validate(chain({C, F, F, F, F, F}, five.bonds)).valid);
    CHECK(validate(chain({C, F, F, F, F, F}, five.bonds), hyper).valid);
}

TEST_CASE("graph checks") {
    CHECK_THROWS_AS(chain({C, C}, {{0, 0, 1}}).check(), Error);
    CHECK_THROWS_AS(chain({C, C}, {{0, 1, 1}, {1, 0, 2}}).check(), Error);
    CHECK_THROWS_AS(chain({C, C}, {{0, 1, 4}}).check(), Error);
    CHECK_THROWS_AS(chain({C, AtomKind::kNone}, {}).check(), Error);
    CHECK_NOTHROW(chain({C, C}, {{0, 1, 3}}).check());
}

TEST_CASE("SMILES examples") {
    CHECK(to_smiles(chain({C}, {})).text == "C");
    CHECK(to_smiles(chain({C, O}, {{0, 1, 2}})).text == "C=O");
    CHECK(to_smiles(chain({O, C}, {{0, 1, 2}})).text == "C=O");
    std::vector<Bond> ring;
    for (std::uint32_t i = 0; i < 6; ++i) ring.push_back({i, (i + 1) % 6, 1});
    const auto hexane = chain({C, C, C, C, C, C}, ring);
    CHECK(to_smiles(hexane).text == "C1CCCCC1");
    CHECK(canonical_key(parse_smiles("C1CCCCC1")) == canonical_key(hexane));
    CHECK(to_smiles(chain({C, N}, {{0, 1, 3}})).text == "C#N");
    CHECK(to_smiles(chain({C, C}, {})).text == "C.C");
    CHECK(to_smiles(MoleculeGraph{}).text.empty());
}

TEST_CASE("SMILES parser") {
    const auto g = parse_smiles("CC(=O)O");
    CHECK(g.size() == 4);
    CHECK(g.bonds.size() == 3);
    const auto cl = parse_smiles("[Cl]C(Cl)(F)N");
    CHECK(cl.atoms[0] == AtomKind::kCl);
    CHECK(std::count(cl.atoms.begin(), cl.atoms.end(), AtomKind::kCl) == 2);
    const auto big = parse_smiles("C%12CC%12");
    CHECK(big.bonds.size() == 3);
    CHECK(parse_smiles("C.O").size() == 2);
    for (const char* bad : {"C(", "C1CC", "X", "C==C", "[Na]", ")C", "C%1"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_smiles(bad), Error);
    }
}

TEST_CASE("SMILES round trips through the canonical key") {
    Rng rng(77);
    int fused = 0;
    for (int t = 0; t < 500; ++t) {
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(9));
        const auto g = oracle::random_graph(rng, n, 0.35, 7);
        const auto s = to_smiles(g);
        REQUIRE_FALSE(s.fallback);
        const auto back = parse_smiles(s.text);
        CHECK(canonical_key(back) == canonical_key(g));
        CHECK(to_smiles(back).text == s.text);
        fused += s.text.find('2') != std::string::npos;
    }
    CHECK(fused > 0);
}

TEST_CASE("canonical SMILES is permutation invariant") {
    Rng rng(5);
    for (int t = 0; t < 200; ++t) {
        const auto g = oracle::random_graph(rng, 1 + static_cast<std::uint32_t>(rng.below(8)), 0.4, 3);
        const auto s = to_smiles(g).text;
        for (int k = 0; k < 5; ++k) CHECK(to_smiles(oracle::permuted(g, oracle::random_permutation(g.size(), rng))).text == s);
    }
}

TEST_CASE("canonical key: permutation invariance and brute-force isomorphism") {
    Rng rng(2024);
    std::vector<MoleculeGraph> pool;
    for (int t = 0; t < 150; ++t) {
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.below(7));
        auto g = oracle::random_graph(rng, n, 0.45, 2);
        const auto key = canonical_key(g);
        for (int k = 0; k < 20; ++k) {
            const auto p = oracle::permuted(g, oracle::random_permutation(n, rng));
            CHECK(canonical_key(p) == key);
            const auto order = canonical_order(p);
            CHECK(order.size() == n);
        }
        pool.push_back(std::move(g));
    }
    int iso = 0, distinct = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
            const bool same_key = canonical_key(pool[i]) == canonical_key(pool[j]);
            const bool same_graph = oracle::isomorphic(pool[i], pool[j]);
            CHECK(same_key == same_graph);
            iso += same_graph;
            distinct += !same_graph;
        }
    }
    CHECK(iso > 0);
    CHECK(distinct > 0);
}

TEST_CASE("canonical key separates regular graphs that colour refinement cannot") {
    // Hexagon versus two triangles: every vertex has degree 2.
    std::vector<Bond> hex, tri;
    for (std::uint32_t i = 0; i < 6; ++i) hex.push_back({i, (i + 1) % 6, 1});
    for (std::uint32_t i = 0; i < 3; ++i) {
        tri.push_back({i, (i + 1) % 3, 1});
        tri.push_back({3 + i, 3 + (i + 1) % 3, 1});
    }
    const std::vector<AtomKind> six(6, C);
    CHECK(canonical_key(chain(six, hex)) != canonical_key(chain(six, tri)));
    // Prism versus the 3-3 bipartite graph (both cubic on six vertices).
    const std::vector<Bond> prism{{0, 1, 1}, {1, 2, 1}, {2, 0, 1}, {3, 4, 1}, {4, 5, 1},
                                  {5, 3, 1}, {0, 3, 1}, {1, 4, 1}, {2, 5, 1}};
    std::vector<Bond> k33;
    for (std::uint32_t i = 0; i < 3; ++i) {
        for (std::uint32_t j = 3; j < 6; ++j) k33.push_back({i, j, 1});
    }
    CHECK(canonical_key(chain(six, prism)) != canonical_key(chain(six, k33)));
    CHECK_FALSE(oracle::isomorphic(chain(six, prism), chain(six, k33)));
}

TEST_CASE("canonical key format") {
    CHECK(canonical_key(MoleculeGraph{}).empty());
    CHECK(canonical_key(chain({C}, {})) == "C;");
    CHECK(canonical_key(chain({O, C}, {{0, 1, 2}})) == canonical_key(chain({C, O}, {{0, 1, 2}})));
    CHECK(canonical_key(chain({C, O}, {{0, 1, 2}})) != canonical_key(chain({C, O}, {{0, 1, 1}})));
}

TEST_CASE("molecule JSON line") {
    const auto g = chain({C, O}, {{0, 1, 2}});
    const auto j = nlohmann::json::parse(molecule_json_line(g, validate(g)));
    CHECK(j.at("smiles") == "C=O");
    CHECK(j.at("valid") == true);
    CHECK(j.at("atoms") == nlohmann::json::array({"C", "O"}));
    CHECK(j.at("failures").empty());
    CHECK(j.at("key") == canonical_key(g));
    const auto bad = chain({C, C}, {});
    const auto jb = nlohmann::json::parse(molecule_json_line(bad, validate(bad)));
    CHECK(jb.at("valid") == false);
    CHECK(jb.at("failures") == nlohmann::json::array({"disconnected"}));
}

TEST_CASE("scaffold decoding keeps the core verbatim") {
    const auto mode = parse_fragment_spec(R"({"mode":"scaffold","atoms":[[0,"C"],[1,"O"]],"bonds":[[0,1,"double"]]})");
    CHECK(mode.mode == GenerationMode::kScaffoldDecoration);
    Rng rng(3);
    for (int t = 0; t < 2000; ++t) {
        const auto rec = decode_index(rng.next_u64(), 4);
        const auto g = decode_shot(rec, 4, {}, {}, mode);
        REQUIRE(g.size() >= 2);
        CHECK(g.atoms[0] == C);
        CHECK(g.atoms[1] == O);
        CHECK(std::count(g.bonds.begin(), g.bonds.end(), Bond{0, 1, 2}) == 1);
    }
}

TEST_CASE("fragment spec errors") {
    CHECK_THROWS_AS(parse_fragment_spec("{"), Error);
    CHECK_THROWS_AS(parse_fragment_spec(R"({"mode":"scaffold","atoms":[[0,"Xx"]]})"), Error);
    CHECK_THROWS_AS(parse_fragment_spec(R"({"mode":"scaffold","atoms":[[0,"C"]],"bonds":[[0,1,"quad"]]})"), Error);
    const auto heavy = parse_fragment_spec(R"({"mode":"scaffold","atoms":[[0,"F"],[1,"C"]],"bonds":[[0,1,2]]})");
    CHECK_THROWS_AS(check_fragment_valence(heavy), Error);
}

TEST_CASE("valence table checks") {
    ValenceTable t;
    CHECK_NOTHROW(t.check());
    t.set(AtomKind::kO, 0);
    CHECK_THROWS_AS(t.check(), Error);
}
