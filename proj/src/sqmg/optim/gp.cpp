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

#include "sqmg/optim/gp.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "sqmg/common/error.hpp"

namespace sqmg {

double matern52(double r, double lengthscale, double signal_variance) {
    const double s = std::sqrt(5.0) * r / lengthscale;
    return signal_variance * (1.0 + s + s * s / 3.0) * std::exp(-s);
}

namespace {

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& x, double ell, double signal) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i, i) = signal;
        for (Eigen::Index j = 0; j < i; ++j) {
            k(i, j) = k(j, i) = matern52((x.row(i) - x.row(j)).norm(), ell, signal);
        }
    }
    return k;
}

}  // namespace

GpModel GpModel::fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const GpConfig& config) {
    require(x.rows() >= 1 && x.rows() == y.size(), ErrorCode::kInvalidArgument, "GP needs matching x rows and y");
    require(!config.lengthscale_factors.empty() && !config.noise_grid.empty(), ErrorCode::kInvalidArgument,
            "GP hyperparameter grid is empty");
    GpModel m;
    m.x_ = x;
    m.signal_ = config.signal_variance;
    m.y_mean_ = y.mean();
    const double var = (y.array() - m.y_mean_).square().mean();
    m.y_scale_ = var > 1e-24 ? std::sqrt(var) : 1.0;
    const Eigen::VectorXd ys = (y.array() - m.y_mean_) / m.y_scale_;
    const double n = static_cast<double>(x.rows());
    const double root_d = std::sqrt(static_cast<double>(x.cols()));

    double best = -std::numeric_limits<double>::infinity();
    for (double factor : config.lengthscale_factors) {
        const double ell = factor * root_d;
        const Eigen::MatrixXd k = kernel_matrix(x, ell, m.signal_);
        for (double noise : config.noise_grid) {
            noise = std::max(noise, config.noise_floor);
            Eigen::LLT<Eigen::MatrixXd> llt;
            double jitter = 0.0;
            while (true) {
                Eigen::MatrixXd kn = k;
                kn.diagonal().array() += noise + jitter;
                llt.compute(kn);
                if (llt.info() == Eigen::Success) break;
                jitter = jitter == 0.0 ? 1e-10 : jitter * 10.0;
                if (jitter > 1e-6) break;
            }
            if (llt.info() != Eigen::Success) continue;
            const Eigen::VectorXd alpha = llt.solve(ys);
            const Eigen::MatrixXd l = llt.matrixL();
            const double lml = -0.5 * ys.dot(alpha) - l.diagonal().array().log().sum() -
                               0.5 * n * std::log(2.0 * std::numbers::pi);
            if (lml > best) {
                best = lml;
                m.lengthscale_ = ell;
                m.noise_ = noise;
                m.jitter_ = jitter;
                m.alpha_ = alpha;
                m.chol_ = l;
                m.lml_ = lml;
            }
        }
    }
    require(std::isfinite(best), ErrorCode::kNumerical, "GP covariance factorization failed for every grid point");
    return m;
}

GpPrediction GpModel::predict(std::span<const double> x) const {
    require(x.size() == dimension(), ErrorCode::kInvalidArgument, "GP query has the wrong dimension");
    const Eigen::Map<const Eigen::RowVectorXd> q(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::VectorXd k(x_.rows());
    for (Eigen::Index i = 0; i < x_.rows(); ++i) k(i) = matern52((x_.row(i) - q).norm(), lengthscale_, signal_);
    GpPrediction p;
    p.mean_std = k.dot(alpha_);
    const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(k);
    p.variance_std = std::max(0.0, signal_ - v.squaredNorm());
    p.mean = y_mean_ + y_scale_ * p.mean_std;
    p.variance = p.variance_std * y_scale_ * y_scale_;
    return p;
}

double expected_improvement(double mu, double sigma, double f_best, double xi) {
    if (!(sigma > 0.0)) return 0.0;
    const double imp = mu - f_best - xi;
    const double z = imp / sigma;
    const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    return std::max(0.0, imp * cdf + sigma * pdf);
}

}  // namespace sqmg
