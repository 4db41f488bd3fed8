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

#ifndef ARRAYSYNTH_DESIGN_HPP
#define ARRAYSYNTH_DESIGN_HPP

#include "arraysynth/errors.hpp"
#include "arraysynth/farfield.hpp"
#include "arraysynth/feednet.hpp"
#include "arraysynth/optimize.hpp"
#include "arraysynth/unitcell.hpp"

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

// Design-level model tying the unit-cell surrogate, the metasurface estimate,
// the feed budget and the array directivity into one scalar objective.
//
// Parameter mapping (all lengths in meters):
//   f_patch  = resonant-length rule inverted for the square patch on h_patch
//   Q_patch  = 1 / (tan_delta + skin_depth / h_patch)
//   f_ms     = Sievenpiper sheet resonance of (wu, gap, h_ms); Q_ms its radiation Q
//   k_slot   = aperture_length / patch_length
//   k_ms     = 0.5 sqrt(h_patch / (h_patch + h_ms))
//   back     = aperture_length * aperture_width / (lambda0 / 4)^2, F/B = -20 log10(back)
//   eff      = radiated fraction of the surrogate / (1 + Q_ms tan_delta_ms)
// The feed line (feed_width, feed_length) is inserted ahead of every leaf of
// the corporate tree, so its mismatch and loss enter the budget.

namespace arraysynth::design {

using cplx = std::complex<double>;

enum Param : std::size_t {
    wu, gap, patch_length, aperture_length, aperture_width, h_ms, h_patch, feed_width, feed_length, n_params
};

inline constexpr std::array<const char *, n_params> parameter_names{
    "wu", "gap", "patch_length", "aperture_length", "aperture_width", "h_ms", "h_patch", "feed_width", "feed_length"};

struct DesignVector {
    std::array<double, n_params> values{};
    std::array<double, n_params> lower{};
    std::array<double, n_params> upper{};

    double &operator[](Param p) { return values[p]; }
    double operator[](Param p) const { return values[p]; }

    std::vector<std::string> violations() const {
        std::vector<std::string> v;
        for (std::size_t i = 0; i < n_params; ++i) {
            if (!(lower[i] < upper[i])) v.push_back(std::string(parameter_names[i]) + ": lower bound must be < upper bound");
            else if (!(values[i] >= lower[i] && values[i] <= upper[i]))
                v.push_back(std::string(parameter_names[i]) + " = " + std::to_string(values[i]) + " outside [" +
                            std::to_string(lower[i]) + ", " + std::to_string(upper[i]) + "]");
        }
        return v;
    }
    void validate() const {
        if (auto v = violations(); !v.empty()) throw ValidationError(std::move(v));
    }
    optimize::Bounds bounds() const {
        return {std::vector<double>(lower.begin(), lower.end()), std::vector<double>(upper.begin(), upper.end())};
    }
};

// 4*wu + 3*gap stays inside a 12.87 mm cell over the whole box.
inline DesignVector default_bounds() {
    DesignVector d;
    d.lower = {1.5e-3, 0.05e-3, 4.0e-3, 0.5e-3, 0.1e-3, 0.5e-3, 0.5e-3, 0.5e-3, 1.0e-3};
    d.upper = {2.9e-3, 0.40e-3, 10.0e-3, 4.0e-3, 2.0e-3, 3.0e-3, 3.0e-3, 3.0e-3, 10.0e-3};
    for (std::size_t i = 0; i < n_params; ++i) d.values[i] = 0.5 * (d.lower[i] + d.upper[i]);
    return d;
}

struct Weights {
    double s11 = 1.0;
    double efficiency = 1.0;
    double front_to_back = 1.0;
    double gain_slope = 1.0;
};

struct ObjectiveSpec {
    unitcell::Band band{10.7e9, 12.7e9};
    double s11_target_db = -20.0;
    double efficiency_target = 0.95;
    double fb_target_db = 20.0;
    double gain_slope_target = 0.0;     // dB/GHz, least-squares slope of realized gain
    Weights weights;
    int n_freq = 41;

    void validate() const {
        band.validate();
        std::vector<std::string> v;
        if (!(weights.s11 >= 0.0 && weights.efficiency >= 0.0 && weights.front_to_back >= 0.0 && weights.gain_slope >= 0.0))
            v.push_back("weights must be >= 0");
        if (!(efficiency_target > 0.0 && efficiency_target <= 1.0)) v.push_back("efficiency_target must lie in (0, 1]");
        if (n_freq < 2) v.push_back("n_freq must be >= 2");
        if (!v.empty()) throw ValidationError(std::move(v));
    }
};

struct ModelConfig {
    unitcell::LayerStack stack = unitcell::default_stack();
    farfield::ArrayLayout layout;
    double stage_loss_db = 0.25;
    feednet::ConnectorModel connector = feednet::ConnectorModel::from_return_loss(20.0);
    farfield::ElementPattern element = farfield::ElementPattern::cosine_power(1.0, -20.0);
    std::size_t directivity_theta = 361;
    std::size_t directivity_phi = 720;
    int directivity_samples = 5;    // across the band, interpolated linearly
};

struct Components {
    double s11 = 0;             // dB above target
    double efficiency = 0;      // fraction below target
    double front_to_back = 0;   // dB below target
    double gain_slope = 0;      // dB/GHz below target
};

struct Evaluation {
    unitcell::SurrogateParams surrogate;
    std::vector<double> freqs;
    std::vector<cplx> s11;
    std::vector<double> efficiency;
    std::vector<double> front_to_back_db;
    std::vector<double> directivity_dbi;
    std::vector<feednet::LossBudget> budget;
    std::vector<double> realized_gain_dbi;
    double worst_s11_db = 0;
    double min_efficiency = 0;
    double min_front_to_back_db = 0;
    double gain_slope_db_per_ghz = 0;
    Components components;
    double scalar = 0;
};

inline double hinge(double x) { return x > 0.0 ? x : 0.0; }

// Hinge penalties per goal and their weighted sum.
inline Components score(const Evaluation &e, const ObjectiveSpec &spec) {
    return {hinge(e.worst_s11_db - spec.s11_target_db), hinge(spec.efficiency_target - e.min_efficiency),
            hinge(spec.fb_target_db - e.min_front_to_back_db), hinge(spec.gain_slope_target - e.gain_slope_db_per_ghz)};
}

inline double weighted(const Components &c, const Weights &w) {
    return w.s11 * c.s11 + w.efficiency * c.efficiency + w.front_to_back * c.front_to_back + w.gain_slope * c.gain_slope;
}

inline double lsq_slope(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
    const double mx = sx / n, my = sy / n;
    double num = 0, den = 0;
    for (std::size_t i = 0; i < x.size(); ++i) num += (x[i] - mx) * (y[i] - my), den += (x[i] - mx) * (x[i] - mx);
    return den > 0.0 ? num / den : 0.0;
}

inline std::vector<double> band_grid(const unitcell::Band &band, int n) {
    std::vector<double> f(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) f[i] = band.f_low + (band.f_high - band.f_low) * i / (n - 1);
    return f;
}

inline msline::Substrate with_height(msline::Substrate s, double h) {
    s.height = h;
    return s;
}

class DesignModel {
public:
    DesignModel(ModelConfig cfg, ObjectiveSpec spec, DesignVector bounds = default_bounds())
        : cfg_(std::move(cfg)), spec_(std::move(spec)), bounds_(bounds) {
        spec_.validate();
        cfg_.layout.validate();
        freqs_ = band_grid(spec_.band, spec_.n_freq);
        ms_ = unitcell::layer_substrate(cfg_.stack, "metasurface");
        patch_ = unitcell::layer_substrate(cfg_.stack, "patch");
        feed_ = unitcell::layer_substrate(cfg_.stack, "feed");
        tree_ = feednet::build_corporate_tree(cfg_.layout.count() >= 2 && std::has_single_bit(cfg_.layout.count())
                                                  ? cfg_.layout.count()
                                                  : throw ArgumentError("array element count must be a power of two"),
                                              std::sqrt(spec_.band.f_low * spec_.band.f_high), feed_, 50.0, cfg_.stage_loss_db);
        precompute_directivity();
    }

    const ModelConfig &config() const { return cfg_; }
    const ObjectiveSpec &spec() const { return spec_; }
    const DesignVector &bounds() const { return bounds_; }
    const std::vector<double> &frequencies() const { return freqs_; }
    const feednet::FeedTree &base_tree() const { return tree_; }

    DesignVector with_values(std::span<const double> x) const {
        if (x.size() != n_params) throw ArgumentError("design vector needs " + std::to_string(n_params) + " values");
        DesignVector d = bounds_;
        std::copy(x.begin(), x.end(), d.values.begin());
        return d;
    }

    unitcell::SurrogateParams surrogate(const DesignVector &d) const {
        const auto psub = with_height(patch_, d[h_patch]);
        unitcell::SurrogateParams p;
        const double ee = msline::eps_eff(psub, d[patch_length]);
        p.f_patch = unitcell::patch_resonant_frequency(d[patch_length], ee);
        p.q_patch = 1.0 / (patch_.tan_delta + msline::skin_depth(p.f_patch, patch_.conductivity) / d[h_patch]);
        p.f_ms = unitcell::sievenpiper_resonance(d[wu], d[gap], d[h_ms], ms_.eps_r);
        p.q_ms = unitcell::sievenpiper_q(d[wu], d[gap], d[h_ms], ms_.eps_r);
        p.k_slot = d[aperture_length] / d[patch_length];
        p.k_ms = 0.5 * std::sqrt(d[h_patch] / (d[h_patch] + d[h_ms]));
        p.z_ref = 50.0;
        return p;
    }

    feednet::FeedTree tree(const DesignVector &d) const {
        feednet::FeedTree t = tree_;
        const msline::MicrostripLine line{d[feed_width], d[feed_length], feed_};
        for (auto &arm : t.stages.back().arm_segments) arm.push_back(line);
        return t;
    }

    Evaluation evaluate(std::span<const double> x) const { return evaluate(with_values(x)); }

    Evaluation evaluate(const DesignVector &d) const {
        d.validate();
        Evaluation e;
        e.surrogate = surrogate(d);
        e.surrogate.validate();
        e.freqs = freqs_;
        e.directivity_dbi = directivity_;
        const auto t = tree(d);
        const double ms_eff = 1.0 / (1.0 + e.surrogate.q_ms * ms_.tan_delta);
        e.worst_s11_db = -std::numeric_limits<double>::infinity();
        e.min_efficiency = std::numeric_limits<double>::infinity();
        e.min_front_to_back_db = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < freqs_.size(); ++i) {
            const double f = freqs_[i];
            const auto pt = unitcell::surrogate_point(e.surrogate, f);
            const double eff = pt.radiated_fraction * ms_eff;
            const double quarter = constants::c0 / f / 4.0;
            const double fb = -20.0 * std::log10(d[aperture_length] * d[aperture_width] / (quarter * quarter));
            const auto b = feednet::network_loss_budget(t, f, cfg_.connector);
            e.s11.push_back(pt.s11);
            e.efficiency.push_back(eff);
            e.front_to_back_db.push_back(fb);
            e.budget.push_back(b);
            e.realized_gain_dbi.push_back(farfield::realized_gain(directivity_[i], eff, b, pt.s11));
            e.worst_s11_db = std::max(e.worst_s11_db, 20.0 * std::log10(std::abs(pt.s11)));
            e.min_efficiency = std::min(e.min_efficiency, eff);
            e.min_front_to_back_db = std::min(e.min_front_to_back_db, fb);
        }
        std::vector<double> ghz(freqs_.size());
        for (std::size_t i = 0; i < ghz.size(); ++i) ghz[i] = freqs_[i] / 1e9;
        e.gain_slope_db_per_ghz = lsq_slope(ghz, e.realized_gain_dbi);
        e.components = score(e, spec_);
        e.scalar = weighted(e.components, spec_.weights);
        return e;
    }

    double objective(std::span<const double> x) const {
        const auto d = with_values(x);
        if (!d.violations().empty()) throw DomainError("design vector outside its bounds");
        // all-zero weights: every design scores 0, skip the models
        const auto &w = spec_.weights;
        if (w.s11 == 0.0 && w.efficiency == 0.0 && w.front_to_back == 0.0 && w.gain_slope == 0.0) return 0.0;
        return evaluate(d).scalar;
    }

private:
    void precompute_directivity() {
        const int ns = std::max(2, cfg_.directivity_samples);
        const auto fs = band_grid(spec_.band, ns);
        const auto grid = farfield::make_sphere_grid(cfg_.directivity_theta, cfg_.directivity_phi);
        const std::vector<cplx> a(cfg_.layout.count(), 1.0);
        std::vector<double> d(fs.size());
        for (std::size_t k = 0; k < fs.size(); ++k)
            d[k] = farfield::directivity(farfield::array_factor(cfg_.layout, a, fs[k], grid, cfg_.element));
        directivity_.resize(freqs_.size());
        for (std::size_t i = 0; i < freqs_.size(); ++i) {
            const double u = (freqs_[i] - fs.front()) / (fs.back() - fs.front()) * (ns - 1);
            const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(u), ns - 2);
            const double t = u - static_cast<double>(k);
            directivity_[i] = (1.0 - t) * d[k] + t * d[k + 1];
        }
    }

    ModelConfig cfg_;
    ObjectiveSpec spec_;
    DesignVector bounds_;
    std::vector<double> freqs_;
    std::vector<double> directivity_;
    msline::Substrate ms_, patch_, feed_;
    feednet::FeedTree tree_;
};

// Prototype coefficients of an n-pole equal-ripple response.
inline std::vector<double> chebyshev_prototype(int n, double return_loss_db) {
    if (n < 1) throw DomainError("filter order must be >= 1");
    detail::require_positive(return_loss_db, "return loss");
    const double ripple_db = -10.0 * std::log10(1.0 - std::pow(10.0, -return_loss_db / 10.0));
    const double beta = std::log(1.0 / std::tanh(ripple_db / 17.37));
    const double gamma = std::sinh(beta / (2.0 * n));
    std::vector<double> g(static_cast<std::size_t>(n) + 2);
    g[0] = 1.0;
    auto a = [&](int k) { return std::sin((2.0 * k - 1.0) * constants::pi / (2.0 * n)); };
    auto b = [&](int k) { return gamma * gamma + std::pow(std::sin(k * constants::pi / n), 2); };
    g[1] = 2.0 * a(1) / gamma;
    for (int k = 2; k <= n; ++k) g[k] = 4.0 * a(k - 1) * a(k) / (b(k - 1) * g[k - 1]);
    g[n + 1] = n % 2 ? 1.0 : std::pow(1.0 / std::tanh(beta / 4.0), 2);
    return g;
}

struct SeedOptions {
    double return_loss_db = 25.0;   // equal-ripple level across the band
    double ms_patch = 2.37e-3;      // metasurface patch size; the gap is solved for
    double fb_margin_db = 6.0;      // F/B headroom above the target at f_high
};

// Analytic feasible point: the two resonators form a 2-pole equal-ripple
// match over the band. k_slot = 1/Q_e1, Q_ms = Q_e2, k_ms = coupling k_12, both
// resonators at the geometric band center. Sheet L and C then follow from
// (f_ms, Q_ms); h_ms from L, gap from C at the chosen patch size.
inline DesignVector analytic_seed(const DesignModel &model, const SeedOptions &opt = {}) {
    const auto &spec = model.spec();
    const double f0 = std::sqrt(spec.band.f_low * spec.band.f_high);
    const double fbw = (spec.band.f_high - spec.band.f_low) / f0;
    const auto g = chebyshev_prototype(2, opt.return_loss_db);
    const double qe1 = g[0] * g[1] / fbw, qe2 = g[2] * g[3] / fbw;
    const double k12 = fbw / std::sqrt(g[1] * g[2]);
    if (!(k12 < 0.5)) throw DomainError("band too wide for the metasurface coupling model");

    const auto &stack = model.config().stack;
    const auto ms = unitcell::layer_substrate(stack, "metasurface");
    const auto patch = unitcell::layer_substrate(stack, "patch");
    const auto feed = unitcell::layer_substrate(stack, "feed");

    DesignVector d = model.bounds();
    const double w0 = 2.0 * constants::pi * f0;
    const double c = qe2 / (constants::eta0 * w0);
    const double l = constants::eta0 / (qe2 * w0);
    d[h_ms] = l / constants::mu0;
    d[wu] = opt.ms_patch;
    const double kc = c * constants::pi / (constants::eps0 * (1.0 + ms.eps_r));
    d[gap] = d[wu] / (std::cosh(kc / d[wu]) - 1.0);

    const double r = 4.0 * k12 * k12;
    d[h_patch] = d[h_ms] * r / (1.0 - r);
    d[patch_length] = unitcell::square_patch_length(f0, with_height(patch, d[h_patch]));
    d[aperture_length] = d[patch_length] / qe1;

    const double quarter = constants::c0 / spec.band.f_high / 4.0;
    d[aperture_width] = std::pow(10.0, -(spec.fb_target_db + opt.fb_margin_db) / 20.0) * quarter * quarter / d[aperture_length];

    d[feed_width] = msline::width_synthesize(feed, 50.0);
    d[feed_length] = msline::guided_wavelength(feed, d[feed_width], f0) / 4.0;
    d.validate();
    return d;
}

// Cell geometry of a design point; the slot arm length carries the aperture length.
inline unitcell::UnitCellGeometry to_geometry(const DesignVector &d, unitcell::LayerStack stack, double period) {
    unitcell::UnitCellGeometry g;
    for (auto &layer : stack) {
        if (layer.role == "metasurface") layer.substrate.height = d[h_ms];
        if (layer.role == "patch") layer.substrate.height = d[h_patch];
    }
    g.stack = std::move(stack);
    g.w1 = g.l1 = period;
    g.dx = g.dy = d[gap];
    g.wu = g.lu = d[wu];
    g.wp = g.lp = d[patch_length];
    g.ws = d[aperture_length];
    g.ls = d[aperture_width];
    return g;
}

struct DesignResult {
    optimize::Result run;
    DesignVector best;
    Evaluation evaluation;
};

inline DesignResult optimize_design(const DesignModel &model, const DesignVector &x0, optimize::Options opt = {}) {
    x0.validate();
    opt.f_target = 0.0;
    const auto run = optimize::trust_region_minimize([&](std::span<const double> x) { return model.objective(x); },
                                                     x0.values, x0.bounds(), opt);
    DesignResult r{run, model.with_values(run.x_best), {}};
    r.evaluation = model.evaluate(r.best);
    return r;
}

} // namespace arraysynth::design

#endif
