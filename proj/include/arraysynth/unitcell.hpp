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

#ifndef ARRAYSYNTH_UNITCELL_HPP
#define ARRAYSYNTH_UNITCELL_HPP

#include "constants.hpp"
#include "errors.hpp"
#include "msline.hpp"

#include <cmath>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace arraysynth::unitcell {

using cplx = std::complex<double>;

struct Band {
    double f_low = 10.7e9;
    double f_high = 12.7e9;

    double center() const { return 0.5 * (f_low + f_high); }
    void validate() const {
        if (!(f_low > 0.0) || !(f_high > f_low))
            throw DomainError("band must satisfy 0 < f_low < f_high, got [" + std::to_string(f_low) + ", " +
                              std::to_string(f_high) + "]");
    }
};

// One dielectric layer of the stack, listed top to bottom. `top_conductor`
// names the copper layer on its upper face, if any.
struct Layer {
    std::string role;           // metasurface | bond | patch | feed
    std::string top_conductor;  // L1..L4 or empty
    msline::Substrate substrate;
};

using LayerStack = std::vector<Layer>;

inline LayerStack default_stack() {
    return {
        {"metasurface", "L1", msline::ro4003c(1.524e-3)},
        {"bond", "", msline::fr4(0.1e-3)},
        {"patch", "L2", msline::ro4003c(1.524e-3)},
        {"bond", "", msline::fr4(0.1e-3)},
        {"feed", "L3", msline::ro4003c(0.813e-3)},
    };
}

inline const msline::Substrate &layer_substrate(const LayerStack &stack, const std::string &role) {
    for (const auto &l : stack)
        if (l.role == role) return l.substrate;
    throw ArgumentError("layer stack has no '" + role + "' layer");
}

struct UnitCellGeometry {
    double w1 = 0, l1 = 0;   // cell period
    double dx = 0, dy = 0;   // metasurface gaps
    double wu = 0, lu = 0;   // metasurface patch
    double ws = 0, ls = 0;   // cross-slot arm length / arm width
    double wp = 0, lp = 0;   // radiating patch
    LayerStack stack;

    std::vector<std::string> violations() const {
        std::vector<std::string> v;
        const std::pair<const char *, double> dims[] = {{"w1", w1}, {"l1", l1}, {"dx", dx}, {"dy", dy}, {"wu", wu},
                                                        {"lu", lu}, {"ws", ws}, {"ls", ls}, {"wp", wp}, {"lp", lp}};
        for (const auto &[name, value] : dims)
            if (!(value > 0.0)) v.push_back(std::string(name) + " must be > 0");
        if (4.0 * wu + 3.0 * dx > w1 * (1.0 + 1e-12)) v.push_back("4*wu + 3*dx exceeds w1 (metasurface does not fit)");
        if (4.0 * lu + 3.0 * dy > l1 * (1.0 + 1e-12)) v.push_back("4*lu + 3*dy exceeds l1 (metasurface does not fit)");
        if (wp > w1) v.push_back("wp exceeds cell width w1");
        if (lp > l1) v.push_back("lp exceeds cell length l1");
        // Cross arms: one along x (ws by ls), one along y (ls by ws).
        if (ws > wp || ws > lp || ls > wp || ls > lp) v.push_back("cross-slot does not fit under the patch footprint");
        if (stack.empty()) v.push_back("layer stack is empty");
        for (const auto &l : stack) {
            try {
                l.substrate.validate();
            } catch (const Error &e) {
                v.push_back(e.what());
            }
        }
        return v;
    }

    void validate() const {
        if (auto v = violations(); !v.empty()) throw ValidationError(std::move(v));
    }
};

// Reference cell dimensions, in meters.
inline UnitCellGeometry reference_cell() {
    UnitCellGeometry g;
    g.w1 = 12.87e-3;
    g.l1 = 12.87e-3;
    g.dx = 0.40e-3;
    g.dy = 0.40e-3;
    g.wu = 2.37e-3;
    g.lu = 2.37e-3;
    g.ws = 2.04e-3;
    g.ls = 0.15e-3;
    g.wp = 5.04e-3;
    g.lp = 5.04e-3;
    g.stack = default_stack();
    return g;
}

struct PatchDims {
    double length = 0;  // resonant length L
    double width = 0;   // W
};

struct ApertureDims {
    double length = 0;  // a_L
    double width = 0;   // a_W
};

// L = c / (2 f0 sqrt(eps_eff)), with the rounded c = 3e8 m/s of the design rule.
inline double patch_resonant_length(double f0, double eps_eff) {
    detail::require_positive(f0, "resonant frequency");
    if (!(eps_eff >= 1.0)) throw DomainError("eps_eff must be >= 1");
    return constants::c_design / (2.0 * f0 * std::sqrt(eps_eff));
}

inline double patch_resonant_frequency(double length, double eps_eff) {
    detail::require_positive(length, "patch length");
    if (!(eps_eff >= 1.0)) throw DomainError("eps_eff must be >= 1");
    return constants::c_design / (2.0 * length * std::sqrt(eps_eff));
}

// Square patch: eps_eff depends on the patch width, which equals the length,
// so iterate to the fixed point.
inline double square_patch_length(double f0, const msline::Substrate &sub) {
    double length = patch_resonant_length(f0, sub.eps_r);
    for (int i = 0; i < 100; ++i) {
        const double next = patch_resonant_length(f0, msline::eps_eff(sub, length));
        if (std::abs(next - length) < 1e-15) return next;
        length = next;
    }
    return length;
}

inline ApertureDims aperture_dims(const PatchDims &patch) {
    detail::require_positive(patch.length, "patch length");
    detail::require_positive(patch.width, "patch width");
    return {patch.length / 10.0, patch.width / 10.0};
}

// Via-less Sievenpiper sheet: L = mu0 h, C from the coplanar-gap fringing formula.
inline double sievenpiper_inductance(double h) {
    detail::require_positive(h, "spacer thickness");
    return constants::mu0 * h;
}

inline double sievenpiper_capacitance(double patch_size, double gap, double eps_r) {
    detail::require_positive(patch_size, "patch size");
    detail::require_positive(gap, "gap");
    detail::require_positive(eps_r, "eps_r");
    return patch_size * constants::eps0 * (1.0 + eps_r) / constants::pi * std::acosh((patch_size + gap) / gap);
}

inline double sievenpiper_resonance(double patch_size, double gap, double h, double eps_r) {
    const double l = sievenpiper_inductance(h);
    const double c = sievenpiper_capacitance(patch_size, gap, eps_r);
    return 1.0 / (2.0 * constants::pi * std::sqrt(l * c));
}

// Radiation Q of the sheet resonance, from the surface bandwidth sqrt(L/C)/eta0.
inline double sievenpiper_q(double patch_size, double gap, double h, double eps_r) {
    const double l = sievenpiper_inductance(h);
    const double c = sievenpiper_capacitance(patch_size, gap, eps_r);
    return constants::eta0 * std::sqrt(c / l);
}

// Coupled-resonator stand-in for the unit-cell input match.
//
// The source (z_ref) drives node 1 through an ideal transformer set by the slot
// coupling. Node 1 is the patch: a parallel resonator at f_patch with unloaded
// quality Q_patch. An admittance inverter of strength k_ms couples it to node 2,
// the metasurface resonator at f_ms whose conductance is its radiation, so
// Q_ms is the radiation Q. Admittances are normalized to the resonators'
// susceptance slope, which makes k_slot = 1/Q_ext and k_ms the usual
// coupling coefficient:
//
//   y_in = 1/Q_patch + j(f/f_patch - f_patch/f) + k_ms^2 / (1/Q_ms + j(f/f_ms - f_ms/f))
//   S11  = (k_slot - y_in) / (k_slot + y_in)
//
// With k_ms = 0, k_slot = 1/Q_patch matches the source at f_patch.
struct SurrogateParams {
    double f_patch = 11.7e9;
    double q_patch = 20.0;
    double f_ms = 11.7e9;
    double q_ms = 5.0;
    double k_slot = 0.05;
    double k_ms = 0.0;
    double z_ref = 50.0;

    void validate() const {
        std::vector<std::string> v;
        if (!(f_patch > 0.0) || !(f_ms > 0.0)) v.push_back("resonance frequencies must be > 0");
        if (!(q_patch > 0.0) || !(q_ms > 0.0)) v.push_back("quality factors must be > 0");
        if (!(k_slot > 0.0 && k_slot <= 1.0)) v.push_back("k_slot must lie in (0, 1]");
        if (!(k_ms >= 0.0 && k_ms <= 1.0)) v.push_back("k_ms must lie in [0, 1]");
        if (!(z_ref > 0.0)) v.push_back("z_ref must be > 0");
        if (!v.empty()) {
            std::string msg = "invalid surrogate parameters:";
            for (const auto &s : v) msg += " " + s + ";";
            throw DomainError(msg);
        }
    }
};

inline double critical_slot_coupling(double q_patch) {
    detail::require_positive(q_patch, "Q_patch");
    return 1.0 / q_patch;
}

struct SurrogatePoint {
    cplx s11;
    double radiated_fraction = 0;   // power in the metasurface conductance / accepted power
};

inline SurrogatePoint surrogate_point(const SurrogateParams &p, double f) {
    const cplx j(0.0, 1.0);
    const cplx y_ms = 1.0 / p.q_ms + j * (f / p.f_ms - p.f_ms / f);
    const cplx y_in = 1.0 / p.q_patch + j * (f / p.f_patch - p.f_patch / f) + p.k_ms * p.k_ms / y_ms;
    SurrogatePoint out;
    out.s11 = (p.k_slot - y_in) / (p.k_slot + y_in);
    const double p_patch = 1.0 / p.q_patch;
    const double p_ms = p.k_ms * p.k_ms / std::norm(y_ms) / p.q_ms;
    out.radiated_fraction = p_ms / (p_patch + p_ms);
    return out;
}

inline void check_frequency_grid(std::span<const double> freqs) {
    if (freqs.empty()) throw DomainError("frequency grid is empty");
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        if (!(freqs[i] > 0.0)) throw DomainError("frequency grid contains a non-positive value");
        if (i > 0 && !(freqs[i] > freqs[i - 1])) throw DomainError("frequency grid is not strictly increasing");
    }
}

inline std::vector<cplx> surrogate_s11(const SurrogateParams &p, std::span<const double> freqs) {
    p.validate();
    check_frequency_grid(freqs);
    std::vector<cplx> out;
    out.reserve(freqs.size());
    for (double f : freqs) out.push_back(surrogate_point(p, f).s11);
    return out;
}

struct SynthOptions {
    std::optional<double> period;           // explicit cell period; default c0 / (2 f_high)
    double ms_gap = 0.40e-3;
    std::optional<double> ms_patch_size;    // default fills the period: period/4 - gap
};

// Patch per the resonant-length rule at band center, aperture per the
// tenth-of-patch rule, 4x4 metasurface across the cell.
inline UnitCellGeometry synth_unitcell(const Band &band, const LayerStack &stack, const SynthOptions &opt = {}) {
    band.validate();
    const auto &patch_sub = layer_substrate(stack, "patch");
    patch_sub.validate();
    const double fc = band.center();

    UnitCellGeometry g;
    g.stack = stack;
    const double period = opt.period.value_or(constants::c0 / (2.0 * band.f_high));
    detail::require_positive(period, "cell period");
    g.w1 = g.l1 = period;

    const double patch_len = square_patch_length(fc, patch_sub);
    g.lp = g.wp = patch_len;

    const ApertureDims ap = aperture_dims({patch_len, patch_len});
    g.ws = ap.length;
    g.ls = ap.width;

    detail::require_positive(opt.ms_gap, "metasurface gap");
    g.dx = g.dy = opt.ms_gap;
    g.wu = g.lu = opt.ms_patch_size.value_or(period / 4.0 - opt.ms_gap);
    g.validate();
    return g;
}

// A dimension whose value differs from what the closed-form rules give.
struct Discrepancy {
    std::string field;
    double geometry_value = 0;  // m
    double rule_value = 0;      // m
    std::string note;
};

inline std::vector<Discrepancy> rule_discrepancies(const UnitCellGeometry &g, double f_center,
                                                   double rel_tol = 0.01) {
    std::vector<Discrepancy> out;
    const auto &patch_sub = layer_substrate(g.stack, "patch");
    const double ee = msline::eps_eff(patch_sub, g.wp);
    const double rule_lp = patch_resonant_length(f_center, ee);
    auto differs = [&](double a, double b) { return std::abs(a - b) > rel_tol * std::abs(b); };
    if (differs(g.lp, rule_lp)) {
        out.push_back({"lp", g.lp, rule_lp,
                       "patch length differs from c/(2 f0 sqrt(eps_eff)) at " + std::to_string(f_center / 1e9) +
                           " GHz (eps_eff " + std::to_string(ee) + "); resonates at " +
                           std::to_string(patch_resonant_frequency(g.lp, ee) / 1e9) + " GHz unloaded"});
    }
    const ApertureDims ap = aperture_dims({g.lp, g.wp});
    if (differs(g.ws, ap.length))
        out.push_back({"ws", g.ws, ap.length, "slot arm length differs from L/10"});
    if (differs(g.ls, ap.width))
        out.push_back({"ls", g.ls, ap.width, "slot arm width differs from W/10"});
    const double fill = g.w1 / 4.0 - g.dx;
    if (differs(g.wu, fill))
        out.push_back({"wu", g.wu, fill, "metasurface patch does not tile the period at the given gap"});
    return out;
}

} // namespace arraysynth::unitcell

#endif
