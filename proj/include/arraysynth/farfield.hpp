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

#ifndef ARRAYSYNTH_FARFIELD_HPP
#define ARRAYSYNTH_FARFIELD_HPP

#include "constants.hpp"
#include "errors.hpp"
#include "feednet.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace arraysynth::farfield {

using cplx = std::complex<double>;

// m columns along x (pitch dx), n rows along y (pitch dy). Element (row q,
// column p) has linear index q*m + p.
struct ArrayLayout {
    int m = 32;
    int n = 32;
    double dx = 12.87e-3;
    double dy = 12.87e-3;

    std::size_t count() const { return static_cast<std::size_t>(m) * static_cast<std::size_t>(n); }
    void validate() const {
        if (m < 1 || n < 1) throw DomainError("array needs at least one row and one column");
        detail::require_positive(dx, "pitch dx");
        detail::require_positive(dy, "pitch dy");
    }
};

struct SphereGrid {
    std::vector<double> theta;  // rad, strictly increasing
    std::vector<double> phi;    // rad, strictly increasing
};

// theta on [0, pi] inclusive, phi periodic on [0, 2*pi).
inline SphereGrid make_sphere_grid(std::size_t n_theta = 721, std::size_t n_phi = 1440) {
    if (n_theta < 3 || n_phi < 4) throw ArgumentError("sphere grid needs n_theta >= 3 and n_phi >= 4");
    SphereGrid g;
    g.theta.resize(n_theta);
    g.phi.resize(n_phi);
    for (std::size_t i = 0; i < n_theta; ++i) g.theta[i] = constants::pi * static_cast<double>(i) / static_cast<double>(n_theta - 1);
    for (std::size_t j = 0; j < n_phi; ++j) g.phi[j] = 2.0 * constants::pi * static_cast<double>(j) / static_cast<double>(n_phi);
    return g;
}

struct FarFieldPattern {
    std::vector<double> theta;
    std::vector<double> phi;
    double frequency = 0;
    std::vector<cplx> field;    // theta-major: field[i * phi.size() + j]

    std::size_t index(std::size_t i, std::size_t j) const { return i * phi.size() + j; }
    double power(std::size_t i, std::size_t j) const { return std::norm(field[index(i, j)]); }
};

struct ElementPattern {
    enum class Kind { isotropic, cosine_power };
    Kind kind = Kind::isotropic;
    double q = 1.0;
    double back_level = 0.0;    // field amplitude for theta > pi/2 (cosine_power only)

    static ElementPattern isotropic() { return {}; }
    static ElementPattern cosine_power(double q, double back_level_db) {
        if (!(q >= 0.0)) throw DomainError("cosine power exponent must be >= 0");
        return {Kind::cosine_power, q, std::isinf(back_level_db) && back_level_db < 0 ? 0.0 : std::pow(10.0, back_level_db / 20.0)};
    }
};

inline cplx element_pattern(const ElementPattern &model, double theta, double /*phi*/) {
    if (model.kind == ElementPattern::Kind::isotropic) return 1.0;
    if (!(model.q >= 0.0)) throw DomainError("cosine power exponent must be >= 0");
    if (theta <= constants::pi / 2.0) return std::pow(std::max(0.0, std::cos(theta)), model.q);
    return model.back_level;
}

namespace detail {

// Rank-one excitations a[q][p] = row[q] * col[p] let the double sum factor.
inline bool try_factor(std::span<const cplx> a, int m, int n, std::vector<cplx> &row, std::vector<cplx> &col) {
    std::size_t pivot = 0;
    double amax = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i]) > amax) amax = std::abs(a[i]), pivot = i;
    row.assign(static_cast<std::size_t>(n), 0.0);
    col.assign(static_cast<std::size_t>(m), 0.0);
    if (amax == 0.0) return true;
    const std::size_t qs = pivot / static_cast<std::size_t>(m), ps = pivot % static_cast<std::size_t>(m);
    for (int q = 0; q < n; ++q) row[q] = a[static_cast<std::size_t>(q) * m + ps];
    for (int p = 0; p < m; ++p) col[p] = a[qs * m + p] / a[pivot];
    for (int q = 0; q < n; ++q)
        for (int p = 0; p < m; ++p)
            if (std::abs(a[static_cast<std::size_t>(q) * m + p] - row[q] * col[p]) > 1e-13 * amax) return false;
    return true;
}

inline cplx horner(std::span<const cplx> coeffs, cplx z) {
    cplx acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
    return acc;
}

} // namespace detail

// AF(theta, phi) = sum_{p,q} a_pq exp(j k (p dx sin(theta) cos(phi) + q dy sin(theta) sin(phi))),
// multiplied by the element pattern. Evaluated by nested Horner recurrences
// (or a product of two line sums for rank-one excitations); rows of the
// theta grid are spread across workers.
inline FarFieldPattern array_factor(const ArrayLayout &layout, std::span<const cplx> excitations, double f,
                                    const SphereGrid &grid, const ElementPattern &element = ElementPattern::isotropic()) {
    layout.validate();
    arraysynth::detail::require_positive(f, "frequency");
    if (excitations.size() != layout.count())
        throw ArgumentError("array_factor: " + std::to_string(excitations.size()) + " excitations for " +
                            std::to_string(layout.count()) + " elements");
    if (grid.theta.empty() || grid.phi.empty()) throw ArgumentError("array_factor: empty angular grid");

    FarFieldPattern pat;
    pat.theta = grid.theta;
    pat.phi = grid.phi;
    pat.frequency = f;
    pat.field.resize(grid.theta.size() * grid.phi.size());

    const double k = 2.0 * constants::pi * f / constants::c0;
    const int m = layout.m, n = layout.n;
    std::vector<cplx> row, col;
    const bool separable = detail::try_factor(excitations, m, n, row, col);

    // Column-major copy so each p has its q coefficients contiguous.
    std::vector<cplx> by_col;
    if (!separable) {
        by_col.resize(excitations.size());
        for (int q = 0; q < n; ++q)
            for (int p = 0; p < m; ++p) by_col[static_cast<std::size_t>(p) * n + q] = excitations[static_cast<std::size_t>(q) * m + p];
    }
    std::vector<double> cos_phi(grid.phi.size()), sin_phi(grid.phi.size());
    for (std::size_t j = 0; j < grid.phi.size(); ++j) cos_phi[j] = std::cos(grid.phi[j]), sin_phi[j] = std::sin(grid.phi[j]);

    parallel_for(0, grid.theta.size(), [&](std::size_t i) {
        const double st = std::sin(grid.theta[i]);
        const cplx el = element_pattern(element, grid.theta[i], 0.0);
        std::vector<cplx> inner(static_cast<std::size_t>(m));
        for (std::size_t j = 0; j < grid.phi.size(); ++j) {
            const cplx zu = std::polar(1.0, k * layout.dx * st * cos_phi[j]);
            const cplx zv = std::polar(1.0, k * layout.dy * st * sin_phi[j]);
            cplx af;
            if (separable) {
                af = detail::horner(col, zu) * detail::horner(row, zv);
            } else {
                for (int p = 0; p < m; ++p)
                    inner[p] = detail::horner(std::span<const cplx>(by_col).subspan(static_cast<std::size_t>(p) * n, n), zv);
                af = detail::horner(inner, zu);
            }
            pat.field[pat.index(i, j)] = af * el;
        }
    });
    return pat;
}

inline std::vector<cplx> excitation_values(std::span<const feednet::LeafExcitation> leaves) {
    std::vector<cplx> out(leaves.size());
    for (const auto &l : leaves) {
        if (l.index >= out.size()) throw ArgumentError("leaf index out of range");
        out[l.index] = l.value();
    }
    return out;
}

inline void require_full_sphere(const FarFieldPattern &p) {
    const double tol = 1e-9;
    if (p.theta.size() < 3 || p.phi.size() < 4) throw ArgumentError("pattern grid too small for sphere integration");
    if (std::abs(p.theta.front()) > tol || std::abs(p.theta.back() - constants::pi) > tol)
        throw ArgumentError("pattern does not cover theta in [0, pi]");
    for (std::size_t i = 1; i < p.theta.size(); ++i)
        if (!(p.theta[i] > p.theta[i - 1])) throw ArgumentError("theta grid not strictly increasing");
    const double step = 2.0 * constants::pi / static_cast<double>(p.phi.size());
    for (std::size_t j = 0; j < p.phi.size(); ++j)
        if (std::abs(p.phi[j] - step * static_cast<double>(j)) > tol)
            throw ArgumentError("pattern does not cover phi uniformly on [0, 2*pi)");
    if (p.field.size() != p.theta.size() * p.phi.size()) throw ArgumentError("pattern sample count mismatch");
}

// 4*pi*U_max over the trapezoid-in-theta, periodic-rectangle-in-phi integral.
// Row sums are accumulated in grid order so the result is independent of the
// worker count.
inline double directivity_linear(const FarFieldPattern &p) {
    require_full_sphere(p);
    const std::size_t nt = p.theta.size(), np = p.phi.size();
    const double dphi = 2.0 * constants::pi / static_cast<double>(np);
    double total = 0.0, umax = 0.0;
    for (std::size_t i = 0; i < nt; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < np; ++j) {
            const double u = p.power(i, j);
            row += u;
            umax = std::max(umax, u);
        }
        double w = 0.0;
        if (i > 0) w += 0.5 * (p.theta[i] - p.theta[i - 1]);
        if (i + 1 < nt) w += 0.5 * (p.theta[i + 1] - p.theta[i]);
        total += w * std::sin(p.theta[i]) * row * dphi;
    }
    if (!(total > 0.0)) throw AnalysisError("pattern carries no power");
    return 4.0 * constants::pi * umax / total;
}

inline double directivity(const FarFieldPattern &p) { return 10.0 * std::log10(directivity_linear(p)); }

struct PatternMetrics {
    double directivity_dbi = 0;
    double peak_theta = 0;                      // rad
    double peak_phi = 0;                        // rad
    double sll_db = -std::numeric_limits<double>::infinity();
    std::array<double, 2> hpbw_deg{};           // cuts at phi = 0 and phi = pi/2
    double front_to_back_db = 0;                // +inf when nothing radiates backward
};

namespace detail {

struct Cut {
    std::vector<double> t;      // signed angle from broadside, rad
    std::vector<double> db;     // power relative to the pattern maximum
};

inline std::size_t nearest_index(const std::vector<double> &grid, double value, bool periodic) {
    std::size_t best = 0;
    double err = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double d = std::abs(grid[i] - value);
        if (periodic) d = std::min(d, 2.0 * constants::pi - d);
        if (d < err) err = d, best = i;
    }
    return best;
}

inline double to_db(double power, double ref) {
    return power > 0.0 ? 10.0 * std::log10(power / ref) : -400.0;
}

// Principal plane through phi0 over the front hemisphere: t = -theta on the
// phi0 + pi half-plane, t = +theta on phi0.
inline Cut principal_cut(const FarFieldPattern &p, double phi0, double ref) {
    const std::size_t j0 = nearest_index(p.phi, phi0, true);
    const std::size_t j1 = nearest_index(p.phi, std::fmod(phi0 + constants::pi, 2.0 * constants::pi), true);
    Cut c;
    for (std::size_t i = p.theta.size(); i-- > 1;) {
        if (p.theta[i] > constants::pi / 2.0 + 1e-12) continue;
        c.t.push_back(-p.theta[i]);
        c.db.push_back(to_db(p.power(i, j1), ref));
    }
    for (std::size_t i = 0; i < p.theta.size(); ++i) {
        if (p.theta[i] > constants::pi / 2.0 + 1e-12) break;
        c.t.push_back(p.theta[i]);
        c.db.push_back(to_db(p.power(i, j0), ref));
    }
    return c;
}

// Vertex of the parabola through three samples (x uniform or not).
inline std::pair<double, double> parabolic_peak(double x0, double y0, double x1, double y1, double x2, double y2) {
    const double d1 = (y1 - y0) / (x1 - x0), d2 = (y2 - y1) / (x2 - x1);
    const double a = (d2 - d1) / (x2 - x0);
    if (a >= 0.0) return {x1, y1};
    const double b = d1 - a * (x0 + x1);
    const double xv = std::clamp(-b / (2.0 * a), x0, x2);
    const double yv = y0 + d1 * (xv - x0) + a * (xv - x0) * (xv - x1);
    return {xv, yv};
}

// Crossing of `level` between samples i and i+1, from the quadratic through
// i-1..i+1 or i..i+2; falls back to linear when the quadratic misbehaves.
inline double crossing(const Cut &c, std::size_t i, double level) {
    const double x0 = c.t[i], x1 = c.t[i + 1];
    const double y0 = c.db[i], y1 = c.db[i + 1];
    double linear = x0 + (level - y0) * (x1 - x0) / (y1 - y0);
    std::size_t a = i > 0 ? i - 1 : i;
    if (a + 2 >= c.t.size()) return linear;
    const double xa = c.t[a], xb = c.t[a + 1], xc = c.t[a + 2];
    const double ya = c.db[a], yb = c.db[a + 1], yc = c.db[a + 2];
    // Newton form of the quadratic, solve by bisection inside the bracket.
    const double d1 = (yb - ya) / (xb - xa), d2 = (yc - yb) / (xc - xb), a2 = (d2 - d1) / (xc - xa);
    auto qf = [&](double x) { return ya + d1 * (x - xa) + a2 * (x - xa) * (x - xb) - level; };
    double lo = std::min(x0, x1), hi = std::max(x0, x1);
    double flo = qf(lo), fhi = qf(hi);
    if (flo * fhi > 0.0) return linear;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi), fm = qf(mid);
        if ((fm > 0.0) == (flo > 0.0))
            lo = mid, flo = fm;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct CutMetrics {
    double hpbw = 0;    // rad
    double sll_db = -std::numeric_limits<double>::infinity();
};

inline CutMetrics analyze_cut(const Cut &c) {
    if (c.t.size() < 5) throw AnalysisError("principal cut too short");
    const std::size_t pk = static_cast<std::size_t>(std::max_element(c.db.begin(), c.db.end()) - c.db.begin());
    double peak_db = c.db[pk];
    if (pk > 0 && pk + 1 < c.t.size())
        peak_db = parabolic_peak(c.t[pk - 1], c.db[pk - 1], c.t[pk], c.db[pk], c.t[pk + 1], c.db[pk + 1]).second;
    const double half = peak_db + 10.0 * std::log10(0.5);

    std::size_t r = pk;
    while (r + 1 < c.t.size() && c.db[r + 1] >= half) ++r;
    std::size_t l = pk;
    while (l > 0 && c.db[l - 1] >= half) --l;
    if (r + 1 >= c.t.size() || l == 0) throw AnalysisError("no identifiable main lobe: pattern never drops 3 dB below its peak");

    // Mirror the left side so crossing() sees the level falling with index.
    Cut left;
    for (std::size_t i = l + 1; i-- > 0;) {
        left.t.push_back(-c.t[i]);
        left.db.push_back(c.db[i]);
    }
    CutMetrics out;
    const double t_right = crossing(c, r, half);
    const double t_left = -crossing(left, 0, half);
    out.hpbw = t_right - t_left;

    std::size_t nr = r;
    while (nr + 1 < c.t.size() && c.db[nr + 1] <= c.db[nr]) ++nr;
    std::size_t nl = l;
    while (nl > 0 && c.db[nl - 1] <= c.db[nl]) --nl;
    for (std::size_t i = 1; i + 1 < c.t.size(); ++i) {
        if (i >= nl && i <= nr) continue;
        if (c.db[i] > c.db[i - 1] && c.db[i] >= c.db[i + 1]) {
            const double v = parabolic_peak(c.t[i - 1], c.db[i - 1], c.t[i], c.db[i], c.t[i + 1], c.db[i + 1]).second;
            out.sll_db = std::max(out.sll_db, v - peak_db);
        }
    }
    return out;
}

} // namespace detail

// Sidelobes and beamwidths are read on the two principal cuts over the front
// hemisphere; the main beam must point into theta <= pi/2.
inline PatternMetrics pattern_metrics(const FarFieldPattern &p) {
    PatternMetrics m;
    m.directivity_dbi = directivity(p);
    std::size_t ipk = 0, jpk = 0;
    double pmax = -1.0;
    for (std::size_t i = 0; i < p.theta.size(); ++i)
        for (std::size_t j = 0; j < p.phi.size(); ++j)
            if (p.power(i, j) > pmax) pmax = p.power(i, j), ipk = i, jpk = j;
    if (!(pmax > 0.0)) throw AnalysisError("pattern carries no power");
    m.peak_theta = p.theta[ipk];
    m.peak_phi = p.phi[jpk];
    if (m.peak_theta > constants::pi / 2.0) throw AnalysisError("main beam points into the rear hemisphere");

    for (int k = 0; k < 2; ++k) {
        const auto cm = detail::analyze_cut(detail::principal_cut(p, k * constants::pi / 2.0, pmax));
        m.hpbw_deg[k] = cm.hpbw * 180.0 / constants::pi;
        m.sll_db = std::max(m.sll_db, cm.sll_db);
    }
    const std::size_t imirror = detail::nearest_index(p.theta, constants::pi - m.peak_theta, false);
    const double back = p.power(imirror, jpk);
    m.front_to_back_db = back > 0.0 ? 10.0 * std::log10(pmax / back) : std::numeric_limits<double>::infinity();
    return m;
}

// Directivity less element inefficiency, feed dissipation and mismatch, and
// the element's own reflection. The 1/N split is not a loss.
inline double realized_gain(double directivity_dbi, double element_efficiency, const feednet::LossBudget &budget, cplx s11) {
    if (!(element_efficiency > 0.0 && element_efficiency <= 1.0)) throw DomainError("element efficiency must lie in (0, 1]");
    if (!(std::abs(s11) < 1.0)) throw DomainError("|s11| must be < 1");
    return directivity_dbi + 10.0 * std::log10(element_efficiency) - budget.dissipative_db - budget.mismatch_db +
           10.0 * std::log10(1.0 - std::norm(s11));
}

} // namespace arraysynth::farfield

#endif
