// SPDX-License-Identifier: Apache-2.0
//
// arraysynth - design and analysis toolkit for aperture-coupled patch arrays
// Copyright (C) 2026 The arraysynth authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef ARRAYSYNTH_OPTIMIZE_HPP
#define ARRAYSYNTH_OPTIMIZE_HPP

#include "arraysynth/errors.hpp"
#include "arraysynth/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

// Bound-constrained trust-region minimizer: BFGS quadratic model fed by
// central finite differences, dogleg steps, projection onto the box.

namespace arraysynth::optimize {

using Objective = std::function<double(std::span<const double>)>;

// Objective threw or returned a non-finite value at x.
class ObjectiveError : public Error {
public:
    ObjectiveError(const std::string &what, std::vector<double> x) : Error(what), x_(std::move(x)) {}
    const std::vector<double> &x() const { return x_; }

private:
    std::vector<double> x_;
};

struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t size() const { return lower.size(); }
    void validate(std::size_t n) const {
        if (lower.size() != n || upper.size() != n)
            throw ArgumentError("bounds have " + std::to_string(lower.size()) + "/" + std::to_string(upper.size()) +
                                " entries for " + std::to_string(n) + " parameters");
        for (std::size_t i = 0; i < n; ++i)
            if (!(upper[i] > lower[i]) || !std::isfinite(lower[i]) || !std::isfinite(upper[i]))
                throw ArgumentError("bound " + std::to_string(i) + " must satisfy finite lower < upper");
    }
    bool contains(std::span<const double> x) const {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!(x[i] >= lower[i] && x[i] <= upper[i])) return false;
        return true;
    }
};

struct Options {
    double initial_radius = 0.1;    // in normalized units (fraction of each range)
    double max_radius = 0.5;
    double tol_x = 1e-10;           // normalized step norm
    double tol_f = 1e-12;           // relative improvement of an accepted step
    double f_target = -std::numeric_limits<double>::infinity();
    int max_evals = 5000;
    int max_iterations = 1000;
    double fd_step = 1e-6;          // fraction of each parameter's range
    bool parallel_stencil = false;
    unsigned workers = 0;           // 0 = worker_count()

    void validate() const {
        if (!(initial_radius > 0.0) || !(max_radius >= initial_radius)) throw ArgumentError("need 0 < initial_radius <= max_radius");
        if (!(tol_x > 0.0) || !(tol_f > 0.0)) throw ArgumentError("tolerances must be > 0");
        if (!(fd_step > 0.0 && fd_step < 0.1)) throw ArgumentError("fd_step must lie in (0, 0.1)");
        if (max_evals < 1 || max_iterations < 1) throw ArgumentError("max_evals and max_iterations must be >= 1");
    }
};

struct HistoryEntry {
    int iteration = 0;
    int evaluations = 0;        // cumulative
    double objective = 0;       // best so far
    double trial = 0;           // objective at the trial point (NaN for the initial entry)
    double radius = 0;          // radius used for this step
    double rho = 0;
    bool accepted = false;
    std::vector<double> x;      // best point so far
};

enum class Termination { target_reached, small_step, small_improvement, max_evaluations, max_iterations, stationary };

inline const char *to_string(Termination t) {
    switch (t) {
    case Termination::target_reached: return "objective reached target";
    case Termination::small_step: return "step below tol_x";
    case Termination::small_improvement: return "improvement below tol_f";
    case Termination::max_evaluations: return "evaluation budget exhausted";
    case Termination::max_iterations: return "iteration limit reached";
    case Termination::stationary: return "projected gradient vanished";
    }
    return "unknown";
}

struct Result {
    std::vector<double> x_best;
    double f_best = 0;
    int evaluations = 0;
    int iterations = 0;
    Termination reason = Termination::max_iterations;
    std::vector<HistoryEntry> history;
};

namespace detail {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Dogleg step for min g.p + p.B.p/2 subject to |p| <= radius.
inline VectorXd dogleg(const VectorXd &g, const MatrixXd &b, double radius) {
    const Eigen::LLT<MatrixXd> llt(b);
    VectorXd pb = llt.info() == Eigen::Success ? VectorXd(-llt.solve(g)) : VectorXd(-g);
    if (pb.norm() <= radius) return pb;
    const double gbg = g.dot(b * g);
    const VectorXd pu = gbg > 0.0 ? VectorXd(-(g.squaredNorm() / gbg) * g) : VectorXd(-radius / g.norm() * g);
    if (pu.norm() >= radius) return radius / pu.norm() * pu;
    const VectorXd d = pb - pu;
    const double a = d.squaredNorm(), bq = 2.0 * pu.dot(d), c = pu.squaredNorm() - radius * radius;
    const double tau = (-bq + std::sqrt(bq * bq - 4.0 * a * c)) / (2.0 * a);
    return pu + tau * d;
}

} // namespace detail

inline Result trust_region_minimize(const Objective &objective, std::span<const double> x0, const Bounds &bounds,
                                    const Options &opt = {}) {
    using detail::MatrixXd;
    using detail::VectorXd;
    const std::size_t n = x0.size();
    if (n == 0) throw ArgumentError("trust_region_minimize: empty parameter vector");
    bounds.validate(n);
    opt.validate();
    if (!bounds.contains(x0)) throw DomainError("trust_region_minimize: x0 lies outside the bounds");

    VectorXd lo(n), span(n);
    for (std::size_t i = 0; i < n; ++i) lo[i] = bounds.lower[i], span[i] = bounds.upper[i] - bounds.lower[i];
    auto to_x = [&](const VectorXd &z) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(lo[i] + z[i] * span[i], bounds.lower[i], bounds.upper[i]);
        return x;
    };

    Result res;
    auto eval = [&](const VectorXd &z) {
        std::vector<double> x = to_x(z);
        double f;
        try {
            f = objective(x);
        } catch (const std::exception &e) {
            throw ObjectiveError(std::string("objective evaluation failed: ") + e.what(), x);
        }
        if (!std::isfinite(f)) throw ObjectiveError("objective returned a non-finite value", x);
        return f;
    };

    // Central differences in normalized coordinates; one-sided at a bound.
    auto gradient = [&](const VectorXd &z) {
        const double h = opt.fd_step;
        std::vector<VectorXd> pts;
        std::vector<double> spacing(n);
        for (std::size_t i = 0; i < n; ++i) {
            VectorXd a = z, b = z;
            a[i] = std::min(1.0, z[i] + h);
            b[i] = std::max(0.0, z[i] - h);
            spacing[i] = a[i] - b[i];
            pts.push_back(a);
            pts.push_back(b);
        }
        std::vector<double> vals(pts.size());
        const unsigned w = opt.parallel_stencil ? (opt.workers ? opt.workers : worker_count()) : 1u;
        parallel_for(0, pts.size(), [&](std::size_t k) { vals[k] = eval(pts[k]); }, w);
        res.evaluations += static_cast<int>(pts.size());
        VectorXd g(n);
        for (std::size_t i = 0; i < n; ++i) g[i] = (vals[2 * i] - vals[2 * i + 1]) / spacing[i];
        return g;
    };

    VectorXd z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = (x0[i] - lo[i]) / span[i];
    double f = eval(z);
    res.evaluations = 1;
    res.x_best = to_x(z);
    res.f_best = f;
    res.history.push_back({0, res.evaluations, f, std::numeric_limits<double>::quiet_NaN(), opt.initial_radius, 0.0, true, res.x_best});

    auto finish = [&](Termination t) {
        res.reason = t;
        return res;
    };
    if (f <= opt.f_target) return finish(Termination::target_reached);

    VectorXd g = gradient(z);
    MatrixXd b = MatrixXd::Identity(n, n);
    double radius = opt.initial_radius;

    for (int iter = 1; iter <= opt.max_iterations; ++iter) {
        res.iterations = iter;
        if (res.evaluations >= opt.max_evals) return finish(Termination::max_evaluations);

        // Variables pinned at a bound with the gradient pushing outward stay put.
        std::vector<int> free;
        for (std::size_t i = 0; i < n; ++i) {
            const bool at_lo = z[i] <= 0.0 && g[i] > 0.0, at_hi = z[i] >= 1.0 && g[i] < 0.0;
            if (!at_lo && !at_hi) free.push_back(static_cast<int>(i));
        }
        VectorXd gf(free.size());
        MatrixXd bf(free.size(), free.size());
        for (std::size_t a = 0; a < free.size(); ++a) {
            gf[a] = g[free[a]];
            for (std::size_t c = 0; c < free.size(); ++c) bf(a, c) = b(free[a], free[c]);
        }
        if (free.empty() || gf.norm() == 0.0) return finish(Termination::stationary);

        const VectorXd pf = detail::dogleg(gf, bf, radius);
        VectorXd trial = z;
        for (std::size_t a = 0; a < free.size(); ++a) trial[free[a]] += pf[a];
        trial = trial.cwiseMax(0.0).cwiseMin(1.0);
        const VectorXd p = trial - z;
        if (p.norm() < opt.tol_x) return finish(Termination::small_step);

        const double f_trial = eval(trial);
        ++res.evaluations;
        const double predicted = -(g.dot(p) + 0.5 * p.dot(b * p));
        const double actual = f - f_trial;
        const double rho = predicted > 0.0 ? actual / predicted : (actual > 0.0 ? 1.0 : -1.0);
        const double used_radius = radius;

        if (rho < 0.25)
            radius = 0.25 * p.norm();
        else if (rho > 0.75 && p.norm() >= 0.99 * radius)
            radius = std::min(2.0 * radius, opt.max_radius);

        const bool accept = rho > 1e-4 && f_trial < f;
        if (accept) {
            const double f_old = f;
            z = trial;
            f = f_trial;
            res.x_best = to_x(z);
            res.f_best = f;
            if (f <= opt.f_target) {
                res.history.push_back({iter, res.evaluations, f, f_trial, used_radius, rho, true, res.x_best});
                return finish(Termination::target_reached);
            }
            const VectorXd g_new = gradient(z);
            const VectorXd y = g_new - g;
            const double sy = p.dot(y);
            if (sy > 1e-12 * p.norm() * y.norm()) {
                const VectorXd bs = b * p;
                b += y * y.transpose() / sy - bs * bs.transpose() / p.dot(bs);
            }
            g = g_new;
            res.history.push_back({iter, res.evaluations, f, f_trial, used_radius, rho, true, res.x_best});
            if (f_old - f < opt.tol_f * std::abs(f_old)) return finish(Termination::small_improvement);
        } else {
            res.history.push_back({iter, res.evaluations, f, f_trial, used_radius, rho, false, res.x_best});
        }
        if (radius < opt.tol_x) return finish(Termination::small_step);
    }
    return finish(Termination::max_iterations);
}

} // namespace arraysynth::optimize

#endif
