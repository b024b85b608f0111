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

#include "sqmg/optim/bayesopt.hpp"

#include <algorithm>
#include <cmath>

#include "sqmg/common/error.hpp"

namespace sqmg {

namespace {

// Unique positive root of x^(d+1) = x + 1.
double harmonious(std::size_t d) {
    double x = 2.0;
    for (int i = 0; i < 64; ++i) x = std::pow(1.0 + x, 1.0 / static_cast<double>(d + 1));
    return x;
}

double frac(double v) { return v - std::floor(v); }

}  // namespace

std::vector<double> rd_point(std::uint64_t index, std::size_t dimension, std::span<const double> shift) {
    const double phi = harmonious(dimension);
    std::vector<double> p(dimension);
    double alpha = 1.0;
    for (std::size_t j = 0; j < dimension; ++j) {
        alpha /= phi;
        const double s = shift.empty() ? 0.0 : shift[j];
        // index * alpha mod 1, split to keep precision for large indices.
        const double step = frac(static_cast<double>(index % (1u << 26)) * alpha) +
                            frac(static_cast<double>(index >> 26) * frac(alpha * 67108864.0));
        p[j] = frac(0.5 + step + s);
    }
    return p;
}

void Box::check() const {
    require(!lower.empty() && lower.size() == upper.size(), ErrorCode::kInvalidArgument, "box bounds mismatch");
    for (std::size_t i = 0; i < lower.size(); ++i) {
        require(lower[i] < upper[i], ErrorCode::kInvalidArgument, "box needs lower < upper");
    }
}

std::vector<double> Box::to_unit(std::span<const double> x) const {
    std::vector<double> u(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) u[i] = (x[i] - lower[i]) / (upper[i] - lower[i]);
    return u;
}

std::vector<double> Box::from_unit(std::span<const double> u) const {
    std::vector<double> x(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) x[i] = lower[i] + u[i] * (upper[i] - lower[i]);
    return x;
}

BoProposal bo_step(std::span<const Observation> history, const Box& bounds, Rng& rng, const BoOptions& options) {
    bounds.check();
    const std::size_t d = bounds.dimension();
    if (history.empty()) {
        return {bounds.from_unit(rd_point(1, d)), 0.0, true};
    }
    Eigen::MatrixXd x(static_cast<Eigen::Index>(history.size()), static_cast<Eigen::Index>(d));
    Eigen::VectorXd y(static_cast<Eigen::Index>(history.size()));
    double f_best = history[0].y;
    for (std::size_t i = 0; i < history.size(); ++i) {
        require(history[i].x.size() == d, ErrorCode::kInvalidArgument, "history point has the wrong dimension");
        const auto u = bounds.to_unit(history[i].x);
        for (std::size_t j = 0; j < d; ++j) x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = u[j];
        y(static_cast<Eigen::Index>(i)) = history[i].y;
        f_best = std::max(f_best, history[i].y);
    }
    const GpModel gp = GpModel::fit(x, y, options.gp);
    auto score = [&](std::span<const double> u) {
        const GpPrediction p = gp.predict(u);
        return expected_improvement(p.mean, std::sqrt(p.variance), f_best, options.xi);
    };

    std::vector<double> shift(d);
    for (double& s : shift) s = rng.uniform();
    std::size_t best_i = 0;
    for (std::size_t i = 1; i < history.size(); ++i) {
        if (history[i].y > history[best_i].y) best_i = i;
    }
    const auto incumbent = bounds.to_unit(history[best_i].x);
    const double half = 0.5 * std::min(1.0, options.local_width * gp.lengthscale() / std::sqrt(static_cast<double>(d)));
    const auto n_local = static_cast<std::uint32_t>(std::clamp(options.local_fraction, 0.0, 1.0) * options.candidates);
    std::vector<double> best_u;
    double best_ei = -1.0;
    for (std::uint32_t k = 1; k <= options.candidates; ++k) {
        auto u = rd_point(k, d, shift);
        if (k <= n_local) {
            for (std::size_t j = 0; j < d; ++j) u[j] = std::clamp(incumbent[j] + (2.0 * u[j] - 1.0) * half, 0.0, 1.0);
        }
        const double ei = score(u);
        if (ei > best_ei) {
            best_ei = ei;
            best_u = std::move(u);
        }
    }

    double delta = 0.5 * std::min(1.0, gp.lengthscale());
    for (std::uint32_t s = 0; s < options.polish_steps; ++s) {
        const std::size_t j = s % d;
        bool improved = false;
        for (double dir : {1.0, -1.0}) {
            auto u = best_u;
            u[j] = std::clamp(u[j] + dir * delta, 0.0, 1.0);
            const double ei = score(u);
            if (ei > best_ei) {
                best_ei = ei;
                best_u = std::move(u);
                improved = true;
                break;
            }
        }
        if (!improved && (j + 1 == d || d == 1)) delta *= 0.5;
    }
    for (double& v : best_u) v = std::min(v, std::nextafter(1.0, 0.0));
    return {bounds.from_unit(best_u), best_ei, false};
}

BayesOpt::BayesOpt(Box bounds, std::uint64_t seed, std::uint32_t n_initial, BoOptions options)
    : bounds_(std::move(bounds)), options_(std::move(options)), n_initial_(std::max<std::uint32_t>(1, n_initial)),
      seed_(seed) {
    bounds_.check();
}

BoProposal BayesOpt::ask() {
    const std::size_t t = history_.size();
    if (t < n_initial_) {
        Rng shift_rng(seed_, ~std::uint64_t{0});
        std::vector<double> shift(bounds_.dimension());
        for (double& s : shift) s = shift_rng.uniform();
        return {bounds_.from_unit(rd_point(t + 1, bounds_.dimension(), shift)), 0.0, true};
    }
    Rng rng(seed_, t);
    return bo_step(history_, bounds_, rng, options_);
}

void BayesOpt::tell(std::vector<double> x, double y) {
    require(x.size() == bounds_.dimension(), ErrorCode::kInvalidArgument, "observation has the wrong dimension");
    require(std::isfinite(y), ErrorCode::kNumerical, "objective returned a non-finite value");
    history_.push_back({std::move(x), y});
}

const Observation* BayesOpt::best() const {
    const Observation* b = nullptr;
    for (const auto& o : history_) {
        if (!b || o.y > b->y) b = &o;
    }
    return b;
}

}  // namespace sqmg
