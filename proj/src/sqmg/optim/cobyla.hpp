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
#include <string_view>
#include <vector>

namespace sqmg {

/// Objective to minimize.
using ScalarObjective = std::function<double(std::span<const double>)>;
/// Fills `c` with constraint values; feasible means every entry >= 0.
using ConstraintFn = std::function<void(std::span<const double> x, std::span<double> c)>;

struct CobylaOptions {
    double rhobeg = 0.5;
    double rhoend = 1e-6;
    std::uint32_t maxfun = 1000;
    /// Optional box, turned into 2n linear constraints. Empty means unbounded.
    std::vector<double> lower;
    std::vector<double> upper;
};

enum class CobylaStatus : std::uint8_t { kConverged, kMaxFun, kRoundingErrors };

std::string_view cobyla_status_name(CobylaStatus s);

struct CobylaResult {
    std::vector<double> x;
    double f = 0.0;
    double max_violation = 0.0;
    std::uint32_t evaluations = 0;
    CobylaStatus status = CobylaStatus::kConverged;
};

/// Powell's COBYLA: linear interpolation on a simplex of n + 1 points inside
/// a trust region whose radius falls from rhobeg to rhoend. Throws
/// kNumerical if the objective or a constraint returns a non-finite value.
CobylaResult cobyla_minimize(const ScalarObjective& f, std::vector<double> x0, const CobylaOptions& options = {});

/// General form with `m` extra inequality constraints.
CobylaResult cobyla_minimize(const ScalarObjective& f, std::vector<double> x0, std::uint32_t m,
                             const ConstraintFn& constraints, const CobylaOptions& options = {});

}  // namespace sqmg
