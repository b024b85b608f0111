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

#include "sqmg/sim/sample_batch.hpp"

#include <json.hpp>

#include "sqmg/common/error.hpp"
#include "sqmg/common/io.hpp"

namespace sqmg {

namespace {

constexpr std::string_view kMagic = "SQMGSMP1";
constexpr std::uint32_t kVersion = 1;

std::uint32_t record_bits(std::uint32_t n_atoms) { return 3 * n_atoms + n_atoms * (n_atoms - 1); }

template <class T>
void put_le(std::string& out, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out.push_back(static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
    }
}

template <class T>
T get_le(std::string_view bytes, std::size_t& pos) {
    require(pos + sizeof(T) <= bytes.size(), ErrorCode::kFormat, "truncated sample file header");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[pos + i])) << (8 * i);
    }
    pos += sizeof(T);
    return static_cast<T>(v);
}

}  // namespace

void SampleBatch::check() const {
    require(n_atoms >= 1, ErrorCode::kFormat, "sample batch needs at least one atom");
    require(codes.size() % record_width() == 0, ErrorCode::kFormat, "sample batch size is not a whole record count");
    for (std::uint64_t s = 0; s < n_shots(); ++s) {
        auto r = record(s);
        for (std::uint32_t i = 0; i < record_width(); ++i) {
            require(r[i] < (i < n_atoms ? 8 : 4), ErrorCode::kFormat,
                    "code out of range in shot " + std::to_string(s));
        }
    }
}

SampleBatch batch_from_classical_bits(std::uint32_t n_atoms, std::span<const std::uint8_t> bits, std::uint64_t seed) {
    SampleBatch b;
    b.n_atoms = n_atoms;
    b.seed = seed;
    const std::uint32_t width = record_bits(n_atoms);
    require(width > 0 && bits.size() % width == 0, ErrorCode::kInvalidArgument,
            "classical bit buffer does not match the atom count");
    const std::uint64_t shots = bits.size() / width;
    b.codes.reserve(shots * b.record_width());
    for (std::uint64_t s = 0; s < shots; ++s) {
        const std::uint8_t* r = bits.data() + s * width;
        for (std::uint32_t i = 0; i < n_atoms; ++i) {
            b.codes.push_back(static_cast<std::uint8_t>(r[3 * i] << 2 | r[3 * i + 1] << 1 | r[3 * i + 2]));
        }
        for (std::uint32_t p = 0; p < b.n_pairs(); ++p) {
            const std::uint32_t at = 3 * n_atoms + 2 * p;
            b.codes.push_back(static_cast<std::uint8_t>(r[at] << 1 | r[at + 1]));
        }
    }
    return b;
}

std::vector<std::uint8_t> record_to_classical_bits(std::uint32_t n_atoms, std::span<const std::uint8_t> record) {
    std::vector<std::uint8_t> bits;
    bits.reserve(record_bits(n_atoms));
    for (std::uint32_t i = 0; i < n_atoms; ++i) {
        for (int k = 2; k >= 0; --k) {
            bits.push_back((record[i] >> k) & 1);
        }
    }
    for (std::size_t p = n_atoms; p < record.size(); ++p) {
        bits.push_back((record[p] >> 1) & 1);
        bits.push_back(record[p] & 1);
    }
    return bits;
}

std::string samples_to_jsonl(const SampleBatch& batch) {
    using nlohmann::json;
    std::string out;
    json header = {{"format", "sqmg-samples"},
                   {"version", kVersion},
                   {"n_atoms", batch.n_atoms},
                   {"seed", batch.seed},
                   {"shots", batch.n_shots()}};
    out += header.dump() + "\n";
    for (std::uint64_t s = 0; s < batch.n_shots(); ++s) {
        auto r = batch.record(s);
        json line = {{"shot", s},
                     {"atoms", std::vector<int>(r.begin(), r.begin() + batch.n_atoms)},
                     {"bonds", std::vector<int>(r.begin() + batch.n_atoms, r.end())}};
        out += line.dump() + "\n";
    }
    return out;
}

SampleBatch samples_from_jsonl(std::string_view text) {
    using nlohmann::json;
    SampleBatch b;
    std::uint64_t expected = 0;
    std::size_t pos = 0;
    std::uint64_t line_no = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        if (line.empty()) continue;
        ++line_no;
        json j;
        try {
            j = json::parse(line);
            if (line_no == 1) {
                require(j.at("format") == "sqmg-samples", ErrorCode::kFormat, "not a sample file");
                require(j.at("version").get<std::uint32_t>() == kVersion, ErrorCode::kFormat,
                        "unsupported sample format version");
                b.n_atoms = j.at("n_atoms").get<std::uint32_t>();
                b.seed = j.at("seed").get<std::uint64_t>();
                expected = j.at("shots").get<std::uint64_t>();
                b.codes.reserve(expected * b.record_width());
                continue;
            }
            auto atoms = j.at("atoms").get<std::vector<int>>();
            auto bonds = j.at("bonds").get<std::vector<int>>();
            require(atoms.size() == b.n_atoms && bonds.size() == b.n_pairs(), ErrorCode::kFormat,
                    "record width mismatch on line " + std::to_string(line_no));
            for (int a : atoms) b.codes.push_back(static_cast<std::uint8_t>(a));
            for (int c : bonds) b.codes.push_back(static_cast<std::uint8_t>(c));
        } catch (const json::exception& e) {
            fail(ErrorCode::kFormat, "sample JSONL line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    require(line_no >= 1, ErrorCode::kFormat, "empty sample file");
    require(b.n_shots() == expected, ErrorCode::kFormat, "sample count does not match header");
    b.check();
    return b;
}

std::string samples_to_binary(const SampleBatch& batch) {
    std::string out(kMagic);
    put_le<std::uint32_t>(out, kVersion);
    put_le<std::uint32_t>(out, batch.n_atoms);
    put_le<std::uint64_t>(out, batch.seed);
    put_le<std::uint64_t>(out, batch.n_shots());
    const std::uint32_t bits_per = record_bits(batch.n_atoms);
    const std::size_t bytes_per = (bits_per + 7) / 8;
    for (std::uint64_t s = 0; s < batch.n_shots(); ++s) {
        auto bits = record_to_classical_bits(batch.n_atoms, batch.record(s));
        std::string packed(bytes_per, '\0');
        for (std::uint32_t k = 0; k < bits_per; ++k) {
            if (bits[k]) packed[k / 8] = static_cast<char>(packed[k / 8] | (1 << (k % 8)));
        }
        out += packed;
    }
    return out;
}

SampleBatch samples_from_binary(std::string_view bytes) {
    require(bytes.substr(0, kMagic.size()) == kMagic, ErrorCode::kFormat, "bad sample file magic");
    std::size_t pos = kMagic.size();
    require(get_le<std::uint32_t>(bytes, pos) == kVersion, ErrorCode::kFormat, "unsupported sample format version");
    const auto n_atoms = get_le<std::uint32_t>(bytes, pos);
    const auto seed = get_le<std::uint64_t>(bytes, pos);
    const auto shots = get_le<std::uint64_t>(bytes, pos);
    require(n_atoms >= 1 && n_atoms < 4096, ErrorCode::kFormat, "bad atom count in sample file");
    const std::uint32_t bits_per = record_bits(n_atoms);
    const std::size_t bytes_per = (bits_per + 7) / 8;
    require(bytes.size() - pos == shots * bytes_per, ErrorCode::kFormat, "sample file size does not match header");
    std::vector<std::uint8_t> bits(shots * bits_per);
    for (std::uint64_t s = 0; s < shots; ++s) {
        for (std::uint32_t k = 0; k < bits_per; ++k) {
            bits[s * bits_per + k] = (static_cast<unsigned char>(bytes[pos + s * bytes_per + k / 8]) >> (k % 8)) & 1;
        }
    }
    return batch_from_classical_bits(n_atoms, bits, seed);
}

void write_samples(const std::string& path, const SampleBatch& batch, SampleFormat format) {
    write_file(path, format == SampleFormat::kBinary ? samples_to_binary(batch) : samples_to_jsonl(batch));
}

SampleBatch read_samples(const std::string& path) {
    const std::string data = read_file(path);
    if (data.compare(0, kMagic.size(), kMagic) == 0) {
        return samples_from_binary(data);
    }
    return samples_from_jsonl(data);
}

}  // namespace sqmg
