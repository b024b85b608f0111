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
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sqmg {

/// Decoded measurement records. Each shot holds N atom codes (3 bits each)
/// followed by N(N-1)/2 bond codes (2 bits each), in lexicographic pair order.
struct SampleBatch {
    std::uint32_t n_atoms = 0;
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;  // not serialized
    std::vector<std::uint8_t> codes;

    std::uint32_t n_pairs() const { return n_atoms * (n_atoms - 1) / 2; }
    std::uint32_t record_width() const { return n_atoms + n_pairs(); }
    std::uint64_t n_shots() const { return record_width() ? codes.size() / record_width() : 0; }
    std::span<const std::uint8_t> record(std::uint64_t shot) const {
        return std::span(codes).subspan(shot * record_width(), record_width());
    }
    std::uint8_t atom_code(std::uint64_t shot, std::uint32_t atom) const { return record(shot)[atom]; }
    std::uint8_t bond_code(std::uint64_t shot, std::uint32_t pair) const { return record(shot)[n_atoms + pair]; }

    /// Throws kFormat when sizes or code ranges are inconsistent.
    void check() const;

    bool operator==(const SampleBatch& other) const {
        return n_atoms == other.n_atoms && seed == other.seed && codes == other.codes;
    }
};

/// Packs per-shot classical slots (3N + 2P bits per shot) into codes.
SampleBatch batch_from_classical_bits(std::uint32_t n_atoms, std::span<const std::uint8_t> bits,
                                      std::uint64_t seed);

/// Inverse of batch_from_classical_bits for a single record.
std::vector<std::uint8_t> record_to_classical_bits(std::uint32_t n_atoms, std::span<const std::uint8_t> record);

enum class SampleFormat : std::uint8_t { kJsonl, kBinary };

/// Version 1 JSONL: a header object, then one {"shot","atoms","bonds"} object per line.
std::string samples_to_jsonl(const SampleBatch& batch);
SampleBatch samples_from_jsonl(std::string_view text);

/// Version 1 binary: "SQMGSMP1", little-endian u32 version, u32 n_atoms,
/// u64 seed, u64 shots, then each record's 3N + 2P bits packed LSB first
/// and padded to a whole byte.
std::string samples_to_binary(const SampleBatch& batch);
SampleBatch samples_from_binary(std::string_view bytes);

void write_samples(const std::string& path, const SampleBatch& batch, SampleFormat format);
/// Detects the format from the leading bytes.
SampleBatch read_samples(const std::string& path);

}  // namespace sqmg
