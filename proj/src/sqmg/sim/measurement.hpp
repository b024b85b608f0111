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

#include <string>

#include "sqmg/common/error.hpp"
#include "sqmg/common/rng.hpp"

namespace sqmg {

inline constexpr double kDegenerateBranchWeight = 1e-14;

/// Draws a measurement outcome from unnormalized branch weights.
inline int sample_branch(double w0, double w1, Rng& rng) {
    if (!(w0 + w1 >= kDegenerateBranchWeight)) {
        fail(ErrorCode::kNumerical, "measurement: both branch weights below 1e-14 (w0=" + std::to_string(w0) +
                                        ", w1=" + std::to_string(w1) + ")");
    }
    const double p1 = w1 / (w0 + w1);
    return rng.uniform() < p1 ? 1 : 0;
}

}  // namespace sqmg
