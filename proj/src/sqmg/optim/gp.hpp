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

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sqmg {

struct GpConfig {
    /// Lengthscale candidates, multiplied by sqrt(dimension).
    std::vector<double> lengthscale_factors{0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0};
    /// Observation-noise variance candidates on the standardized scale.
    std::vector<double> noise_grid{1e-6, 1e-4, 1e-2, 1e-1};
    double noise_floor = 1e-6;
    double signal_variance = 1.0;
};

struct GpPrediction {
    double mean = 0.0;      // original units
    double variance = 0.0;  // original units
    double mean_std = 0.0;  // standardized
    double variance_std = 0.0;
};

/// Matern-5/2 of Euclidean distance r.
double matern52(double r, double lengthscale, double signal_variance = 1.0);

/// Gaussian-process regression on the unit cube with standardized targets.
/// Hyperparameters maximize the log marginal likelihood over the grid.
class GpModel {
   public:
    /// `x` rows are points already scaled to [0, 1]^d.
    static GpModel fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GpConfig& config = {});

    GpPrediction predict(std::span<const double> x) const;

    double lengthscale() const { return lengthscale_; }
    double noise() const { return noise_; }
    double jitter() const { return jitter_; }
    double log_marginal_likelihood() const { return lml_; }
    double y_mean() const { return y_mean_; }
    double y_scale() const { return y_scale_; }
    std::size_t dimension() const { return static_cast<std::size_t>(x_.cols()); }

   private:
    Eigen::MatrixXd x_;
    Eigen::VectorXd alpha_;
    Eigen::MatrixXd chol_;  // lower Cholesky factor
    double lengthscale_ = 1.0;
    double noise_ = 1e-6;
    double jitter_ = 0.0;
    double signal_ = 1.0;
    double lml_ = 0.0;
    double y_mean_ = 0.0;
    double y_scale_ = 1.0;
};

/// Expected improvement for maximization; 0 when sigma is 0.
double expected_improvement(double mu, double sigma, double f_best, double xi = 0.01);

}  // namespace sqmg
