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

#ifndef ARRAYSYNTH_SPARAMS_HPP
#define ARRAYSYNTH_SPARAMS_HPP

#include "constants.hpp"
#include "errors.hpp"
#include "msline.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace arraysynth {

using cplx = std::complex<double>;
using Abcd = Eigen::Matrix2cd;

// n-port scattering data on a strictly increasing frequency grid.
struct SParameterBlock {
    int n_ports = 0;
    std::vector<double> freqs;              // Hz
    std::vector<Eigen::MatrixXcd> data;     // one n x n matrix per frequency
    double z_ref = 50.0;
    bool lossless = false;                  // asserts unitarity when validated

    std::size_t size() const noexcept { return freqs.size(); }

    void validate() const {
        std::vector<std::string> issues;
        if (n_ports < 1) issues.push_back("n_ports must be >= 1");
        if (!(z_ref > 0.0)) issues.push_back("z_ref must be > 0");
        if (data.size() != freqs.size()) issues.push_back("data/frequency count mismatch");
        for (std::size_t i = 0; i < freqs.size(); ++i) {
            if (!(freqs[i] > 0.0)) issues.push_back("frequency " + std::to_string(i) + " not positive");
            if (i > 0 && !(freqs[i] > freqs[i - 1])) issues.push_back("frequencies not strictly increasing at " + std::to_string(i));
            if (i < data.size()) {
                const auto &m = data[i];
                if (m.rows() != n_ports || m.cols() != n_ports) {
                    issues.push_back("matrix " + std::to_string(i) + " has wrong dimensions");
                } else if (lossless) {
                    const Eigen::MatrixXcd residual = m.adjoint() * m - Eigen::MatrixXcd::Identity(n_ports, n_ports);
                    if (residual.cwiseAbs().maxCoeff() > 1e-9) issues.push_back("lossless block not unitary at " + std::to_string(i));
                }
            }
        }
        if (!issues.empty()) throw ValidationError(std::move(issues));
    }
};

inline SParameterBlock single_frequency_block(double f, const Eigen::MatrixXcd &s, double z_ref) {
    SParameterBlock b;
    b.n_ports = static_cast<int>(s.rows());
    b.freqs = {f};
    b.data = {s};
    b.z_ref = z_ref;
    return b;
}

// ABCD to S with real reference impedances z1 (port 1) and z2 (port 2).
inline Eigen::Matrix2cd abcd_to_s(const Abcd &m, double z1, double z2) {
    const cplx A = m(0, 0), B = m(0, 1), C = m(1, 0), D = m(1, 1);
    const cplx den = A * z2 + B + C * z1 * z2 + D * z1;
    const double root = std::sqrt(z1 * z2);
    Eigen::Matrix2cd s;
    s(0, 0) = (A * z2 + B - C * z1 * z2 - D * z1) / den;
    s(0, 1) = 2.0 * (A * D - B * C) * root / den;
    s(1, 0) = 2.0 * root / den;
    s(1, 1) = (-A * z2 + B - C * z1 * z2 + D * z1) / den;
    return s;
}

inline Eigen::Matrix2cd abcd_to_s(const Abcd &m, double z0) { return abcd_to_s(m, z0, z0); }

inline Abcd s_to_abcd(const Eigen::Matrix2cd &s, double z0) {
    const cplx s11 = s(0, 0), s12 = s(0, 1), s21 = s(1, 0), s22 = s(1, 1);
    if (std::abs(s21) == 0.0) throw DomainError("two-port with S21 = 0 has no ABCD representation");
    Abcd m;
    m(0, 0) = ((1.0 + s11) * (1.0 - s22) + s12 * s21) / (2.0 * s21);
    m(0, 1) = z0 * ((1.0 + s11) * (1.0 + s22) - s12 * s21) / (2.0 * s21);
    m(1, 0) = ((1.0 - s11) * (1.0 - s22) - s12 * s21) / (2.0 * s21 * z0);
    m(1, 1) = ((1.0 - s11) * (1.0 + s22) + s12 * s21) / (2.0 * s21);
    return m;
}

// Line of characteristic impedance z with complex electrical length
// gamma*l = attenuation_np + j*theta.
inline Abcd line_abcd(cplx z, double theta, double attenuation_np = 0.0) {
    const cplx gl(attenuation_np, theta);
    const cplx ch = std::cosh(gl), sh = std::sinh(gl);
    Abcd m;
    m << ch, z * sh, sh / z, ch;
    return m;
}

inline cplx input_impedance(const Abcd &m, cplx z_load) {
    return (m(0, 0) * z_load + m(0, 1)) / (m(1, 0) * z_load + m(1, 1));
}

inline cplx reflection(cplx z, double z0) { return (z - z0) / (z + z0); }

// Two-port building blocks for cascade_abcd.
namespace twoport {

struct Identity {};

// Ideal TEM line; theta0 is the electrical length at f0 and scales with f.
struct IdealLine {
    double z = 50.0;
    double theta0 = constants::pi / 2.0;
    double f0 = 1e9;
    double loss_db = 0.0;   // total attenuation, frequency independent
};

struct Microstrip {
    msline::MicrostripLine line;
};

struct SeriesImpedance {
    cplx z;
};

struct ShuntAdmittance {
    cplx y;
};

// Matched attenuator referenced to z_ref.
struct Attenuator {
    double loss_db = 0.0;
    double z_ref = 50.0;
};

struct FixedAbcd {
    Abcd m = Abcd::Identity();
};

} // namespace twoport

using TwoPortElement = std::variant<twoport::Identity, twoport::IdealLine, twoport::Microstrip, twoport::SeriesImpedance,
                                    twoport::ShuntAdmittance, twoport::Attenuator, twoport::FixedAbcd>;

inline Abcd microstrip_abcd(const msline::MicrostripLine &line, double f) {
    const double ee = msline::eps_eff(line.substrate, line.width);
    const double beta = 2.0 * constants::pi * f * std::sqrt(ee) / constants::c0;
    const double alpha = msline::attenuation(line.substrate, line.width, f).total();
    return line_abcd(msline::z0_analyze(line.substrate, line.width), beta * line.length, alpha * line.length);
}

inline Abcd attenuator_abcd(double loss_db, double z_ref) {
    const double a = loss_db / constants::np_to_db;
    Abcd m;
    m << std::cosh(a), z_ref * std::sinh(a), std::sinh(a) / z_ref, std::cosh(a);
    return m;
}

inline Abcd element_abcd(const TwoPortElement &e, double f) {
    detail::require_positive(f, "frequency");
    struct Visitor {
        double f;
        Abcd operator()(const twoport::Identity &) const { return Abcd::Identity(); }
        Abcd operator()(const twoport::IdealLine &l) const {
            detail::require_positive(l.f0, "design frequency");
            return line_abcd(l.z, l.theta0 * f / l.f0, l.loss_db / constants::np_to_db);
        }
        Abcd operator()(const twoport::Microstrip &m) const { return microstrip_abcd(m.line, f); }
        Abcd operator()(const twoport::SeriesImpedance &s) const {
            Abcd m;
            m << 1.0, s.z, 0.0, 1.0;
            return m;
        }
        Abcd operator()(const twoport::ShuntAdmittance &s) const {
            Abcd m;
            m << 1.0, 0.0, s.y, 1.0;
            return m;
        }
        Abcd operator()(const twoport::Attenuator &a) const { return attenuator_abcd(a.loss_db, a.z_ref); }
        Abcd operator()(const twoport::FixedAbcd &a) const { return a.m; }
    };
    return std::visit(Visitor{f}, e);
}

inline std::optional<double> element_reference(const TwoPortElement &e) {
    if (const auto *a = std::get_if<twoport::Attenuator>(&e)) return a->z_ref;
    return std::nullopt;
}

inline Abcd chain_abcd(const std::vector<TwoPortElement> &chain, double f) {
    Abcd total = Abcd::Identity();
    for (const auto &e : chain) total = total * element_abcd(e, f);
    return total;
}

// Multiplies the element ABCD matrices in order and returns the 2-port S block.
inline SParameterBlock cascade_abcd(const std::vector<TwoPortElement> &chain, double f, double z_ref = 50.0) {
    if (chain.empty()) throw ArgumentError("cascade_abcd: empty chain");
    detail::require_positive(z_ref, "reference impedance");
    for (const auto &e : chain) {
        if (auto z = element_reference(e); z && std::abs(*z - z_ref) > 1e-12 * z_ref)
            throw ArgumentError("cascade_abcd: element reference impedance " + std::to_string(*z) +
                                " differs from chain reference " + std::to_string(z_ref));
    }
    return single_frequency_block(f, abcd_to_s(chain_abcd(chain, f), z_ref), z_ref);
}

// Re-enters an S block as a chain element so cascades can be nested.
inline TwoPortElement as_element(const SParameterBlock &block, std::size_t index = 0) {
    if (block.n_ports != 2) throw ArgumentError("as_element: block is not a 2-port");
    return twoport::FixedAbcd{s_to_abcd(block.data.at(index), block.z_ref)};
}

} // namespace arraysynth

#endif
