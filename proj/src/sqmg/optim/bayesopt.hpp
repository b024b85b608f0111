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
#include <functional>
#include <span>
#include <vector>

#include "sqmg/common/rng.hpp"
#include "sqmg/optim/gp.hpp"

namespace sqmg {

/// Point `index` (from 1) of the additive-recurrence R_d sequence in [0,1)^d,
/// offset by `shift` (mod 1). With a zero shift the sequence starts at 0.5.
std::vector<double> rd_point(std::uint64_t index, std::size_t dimension, std::span<const double> shift = {});

struct Box {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dimension() const { return lower.size(); }
    void check() const;
    std::vector<double> to_unit(std::span<const double> x) const;
    std::vector<double> from_unit(std::span<const double> u) const;
};

struct Observation {
    std::vector<double> x;
    double y = 0.0;
};

struct BoOptions {
    GpConfig gp;
    double xi = 0.01;
    std::uint32_t candidates = 4096;
    std::uint32_t polish_steps = 16;
    /// Share of candidates drawn from a box around the incumbent, of side
    /// local_width * lengthscale / sqrt(d) per coordinate.
    double local_fraction = 0.9;
    double local_width = 2.0;
};

struct BoProposal {
    std::vector<double> x;
    double ei = 0.0;
    bool seeded = false;  // true when taken from the low-discrepancy seed
};

/// One Bayesian-optimization step (maximization): fit the GP, score shifted
/// R_d candidates (global, plus a local share around the incumbent) by EI,
/// polish the best coordinate-wise. An empty history returns the first R_d
/// point.
BoProposal bo_step(std::span<const Observation> history, const Box& bounds, Rng& rng,
                   const BoOptions& options = {});

/// Ask/tell driver. The first `n_initial` proposals are R_d points under a
/// seed-dependent shift.
class BayesOpt {
   public:
    BayesOpt(Box bounds, std::uint64_t seed, std::uint32_t n_initial = 1, BoOptions options = {});

    BoProposal ask();
    void tell(std::vector<double> x, double y);

    const std::vector<Observation>& history() const { return history_; }
    const Observation* best() const;

   private:
    Box bounds_;
    BoOptions options_;
    std::uint32_t n_initial_;
    std::uint64_t seed_;
    std::vector<Observation> history_;
};

}  // namespace sqmg
