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

#ifndef ARRAYSYNTH_MSLINE_HPP
#define ARRAYSYNTH_MSLINE_HPP

#include "constants.hpp"
#include "errors.hpp"

#include <cmath>
#include <limits>
#include <string>

// Quasi-static microstrip analysis and synthesis (Hammerstad closed forms).

namespace arraysynth::msline {

struct Substrate {
    std::string name;
    double eps_r = 1.0;
    double tan_delta = 0.0;
    double height = 1e-3;               // m
    double conductor_thickness = 0.0;   // m
    double conductivity = 5.8e7;        // S/m, may be +inf for a perfect conductor

    void validate() const {
        if (!(eps_r >= 1.0)) throw DomainError("substrate '" + name + "': eps_r must be >= 1");
        if (!(height > 0.0)) throw DomainError("substrate '" + name + "': height must be > 0");
        if (!(tan_delta >= 0.0)) throw DomainError("substrate '" + name + "': tan_delta must be >= 0");
        if (!(conductor_thickness >= 0.0)) throw DomainError("substrate '" + name + "': conductor thickness must be >= 0");
        if (!(conductivity > 0.0)) throw DomainError("substrate '" + name + "': conductivity must be > 0");
    }
};

// Vendor datasheet constants; heights are the defaults used by the reference stack.
inline Substrate ro4003c(double height = 1.524e-3) {
    return {"RO4003C", 3.38, 0.0027, height, 35e-6, 5.8e7};
}

inline Substrate fr4(double height = 0.1e-3) {
    return {"FR-4", 4.4, 0.02, height, 35e-6, 5.8e7};
}

struct MicrostripLine {
    double width = 1e-3;    // m
    double length = 0.0;    // m
    Substrate substrate;

    void validate() const {
        if (!(width > 0.0)) throw DomainError("microstrip width must be > 0");
        if (!(length >= 0.0)) throw DomainError("microstrip length must be >= 0");
        substrate.validate();
    }
};

inline double eps_eff(const Substrate &sub, double width) {
    detail::require_positive(width, "width");
    detail::require_positive(sub.height, "substrate height");
    const double u = width / sub.height;
    const double a = 0.5 * (sub.eps_r + 1.0);
    const double b = 0.5 * (sub.eps_r - 1.0);
    double f = 1.0 / std::sqrt(1.0 + 12.0 / u);
    if (u < 1.0) f += 0.04 * (1.0 - u) * (1.0 - u);
    return a + b * f;
}

// Narrow branch for w/h <= 1, wide branch above.
inline double z0_analyze(const Substrate &sub, double width) {
    const double ee = eps_eff(sub, width);
    const double u = width / sub.height;
    if (u <= 1.0) return 60.0 / std::sqrt(ee) * std::log(8.0 / u + 0.25 * u);
    return constants::eta0 / (std::sqrt(ee) * (u + 1.393 + 0.667 * std::log(u + 1.444)));
}

inline constexpr double synth_tolerance_ohm = 0.01;
inline constexpr double synth_min_ratio = 0.01;
inline constexpr double synth_max_ratio = 100.0;

// Bisection on the monotone z0_analyze curve over w in [h/100, 100h]. The two
// Hammerstad branches do not meet exactly at w/h = 1 (Z0 drops by about
// 0.6/sqrt(eps_eff) ohm there). Targets inside that jump resolve to w = h, the
// closest realizable line; everywhere else the result is within 0.01 ohm.
inline double width_synthesize(const Substrate &sub, double z_target) {
    sub.validate();
    detail::require_positive(z_target, "target impedance");
    double lo = sub.height * synth_min_ratio;
    double hi = sub.height * synth_max_ratio;
    const double z_max = z0_analyze(sub, lo);
    const double z_min = z0_analyze(sub, hi);
    if (z_target > z_max + synth_tolerance_ohm || z_target < z_min - synth_tolerance_ohm) {
        throw RangeError("impedance " + std::to_string(z_target) + " ohm outside achievable range [" +
                             std::to_string(z_min) + ", " + std::to_string(z_max) + "] ohm",
                         z_min, z_max);
    }
    for (int it = 0; it < 200 && hi - lo > 1e-15 * sub.height; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (z0_analyze(sub, mid) > z_target)
            lo = mid;
        else
            hi = mid;
    }
    const double err_lo = std::abs(z0_analyze(sub, lo) - z_target);
    const double err_hi = std::abs(z0_analyze(sub, hi) - z_target);
    return err_lo <= err_hi ? lo : hi;
}

inline double guided_wavelength(const Substrate &sub, double width, double f) {
    detail::require_positive(f, "frequency");
    return constants::c0 / (f * std::sqrt(eps_eff(sub, width)));
}

inline double surface_resistance(double f, double conductivity) {
    if (std::isinf(conductivity)) return 0.0;
    return std::sqrt(constants::pi * f * constants::mu0 / conductivity);
}

inline double skin_depth(double f, double conductivity) {
    if (std::isinf(conductivity)) return 0.0;
    return 1.0 / std::sqrt(constants::pi * f * constants::mu0 * conductivity);
}

struct Attenuation {
    double dielectric_np_per_m = 0.0;
    double conductor_np_per_m = 0.0;
    double total() const { return dielectric_np_per_m + conductor_np_per_m; }
};

// Dielectric term uses the filling-factor form, conductor term the strip
// surface resistance over Z0*w.
inline Attenuation attenuation(const Substrate &sub, double width, double f) {
    detail::require_positive(f, "frequency");
    const double ee = eps_eff(sub, width);
    const double k0 = 2.0 * constants::pi * f / constants::c0;
    const double fill = sub.eps_r - 1.0 > 1e-12 ? (ee - 1.0) / (sub.eps_r - 1.0) : 1.0;
    Attenuation a;
    a.dielectric_np_per_m = 0.5 * k0 * sub.eps_r * fill * sub.tan_delta / std::sqrt(ee);
    a.conductor_np_per_m = surface_resistance(f, sub.conductivity) / (z0_analyze(sub, width) * width);
    return a;
}

inline double line_loss(const MicrostripLine &line, double f) {
    line.validate();
    return constants::np_to_db * attenuation(line.substrate, line.width, f).total() * line.length;
}

} // namespace arraysynth::msline

#endif
