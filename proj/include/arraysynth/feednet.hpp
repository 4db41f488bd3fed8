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

#ifndef ARRAYSYNTH_FEEDNET_HPP
#define ARRAYSYNTH_FEEDNET_HPP

#include "constants.hpp"
#include "errors.hpp"
#include "msline.hpp"
#include "sparams.hpp"

#include <Eigen/Dense>

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

// Wilkinson dividers and the binary corporate feed built from them.

namespace arraysynth::feednet {

using Matrix3 = Eigen::Matrix3cd;

// Exact 3-port response of an equal-split Wilkinson divider, from the even/odd
// mode half circuits. Each arm is a line of impedance z_section and electrical
// length theta; r_iso bridges ports 2 and 3. A section loss is modeled as a
// matched attenuator at each output arm.
inline Matrix3 wilkinson_3port(double z_section, double theta, double r_iso, double z_ref, double section_loss_db = 0.0) {
    detail::require_positive(z_section, "section impedance");
    detail::require_positive(r_iso, "isolation resistor");
    detail::require_positive(z_ref, "reference impedance");
    const Abcd line = line_abcd(z_section, theta);

    // Even mode: port 1 half sees 2*z_ref, the resistor midpoint is open.
    const Eigen::Matrix2cd se = abcd_to_s(line, 2.0 * z_ref, z_ref);

    // Odd mode: line shorted at the port 1 end, in parallel with r_iso/2.
    const cplx b = line(0, 1), d = line(1, 1);
    const double rh = 0.5 * r_iso;
    const cplx z_odd = rh * b / (rh * d + b);
    const cplx g_odd = reflection(z_odd, z_ref);

    const double t = std::pow(10.0, -section_loss_db / 20.0);
    Matrix3 s;
    const cplx s21 = se(1, 0) / std::sqrt(2.0) * t;
    const cplx s22 = 0.5 * (se(1, 1) + g_odd) * t * t;
    const cplx s23 = 0.5 * (se(1, 1) - g_odd) * t * t;
    s << se(0, 0), s21, s21,
         s21, s22, s23,
         s21, s23, s22;
    return s;
}

// Ideal divider designed at f0: sqrt(2)*z_ref quarter-wave arms, 2*z_ref resistor.
inline SParameterBlock wilkinson_sparams(double f, double f0, double z_ref = 50.0, double loss_per_section_db = 0.0) {
    detail::require_positive(f, "frequency");
    detail::require_positive(f0, "design frequency");
    const double theta = 0.5 * constants::pi * f / f0;
    return single_frequency_block(
        f, wilkinson_3port(std::sqrt(2.0) * z_ref, theta, 2.0 * z_ref, z_ref, loss_per_section_db), z_ref);
}

struct WilkinsonStage {
    double section_impedance = 0;       // ohm
    double isolation_resistance = 0;    // ohm
    double section_loss_db = 0;         // insertion loss per arm beyond the split
    msline::MicrostripLine quarter_wave;
    // Line segments between this stage's output arms and the next stage (or leaf).
    std::array<std::vector<msline::MicrostripLine>, 2> arm_segments;

    double electrical_length(double f) const {
        const double ee = msline::eps_eff(quarter_wave.substrate, quarter_wave.width);
        return 2.0 * constants::pi * f * std::sqrt(ee) * quarter_wave.length / constants::c0;
    }

    Matrix3 sparams(double f, double z_ref) const {
        return wilkinson_3port(section_impedance, electrical_length(f), isolation_resistance, z_ref, section_loss_db);
    }
};

// Stage 0 is the root (tree input); stage depth-1 feeds the leaves.
struct FeedTree {
    int depth = 0;
    std::vector<WilkinsonStage> stages;
    double f0 = 0;
    double z_ref = 50.0;

    std::size_t n_outputs() const { return std::size_t{1} << depth; }

    std::vector<std::string> violations() const {
        std::vector<std::string> v;
        if (depth < 1) v.push_back("depth must be >= 1");
        if (static_cast<int>(stages.size()) != depth) v.push_back("stage count differs from depth");
        if (!(f0 > 0.0)) v.push_back("f0 must be > 0");
        if (!(z_ref > 0.0)) v.push_back("z_ref must be > 0");
        const double z_target = std::sqrt(2.0) * z_ref;
        for (std::size_t i = 0; i < stages.size(); ++i) {
            const auto &s = stages[i];
            const std::string tag = "stage " + std::to_string(i) + ": ";
            if (std::abs(s.section_impedance - z_target) > 1e-3 * z_target)
                v.push_back(tag + "section impedance " + std::to_string(s.section_impedance) + " not within 0.1% of sqrt(2)*z_ref");
            if (std::abs(s.isolation_resistance - 2.0 * z_ref) > 1e-12 * z_ref)
                v.push_back(tag + "isolation resistor " + std::to_string(s.isolation_resistance) + " differs from 2*z_ref");
            if (!(s.section_loss_db >= 0.0)) v.push_back(tag + "section loss must be >= 0");
        }
        return v;
    }

    void validate() const {
        if (auto v = violations(); !v.empty()) throw ValidationError(std::move(v));
    }
};

inline WilkinsonStage design_stage(double f0, const msline::Substrate &sub, double z_ref, double section_loss_db) {
    WilkinsonStage s;
    const double width = msline::width_synthesize(sub, std::sqrt(2.0) * z_ref);
    s.quarter_wave = {width, msline::guided_wavelength(sub, width, f0) / 4.0, sub};
    s.section_impedance = msline::z0_analyze(sub, width);
    s.isolation_resistance = 2.0 * z_ref;
    s.section_loss_db = section_loss_db;
    return s;
}

inline FeedTree build_corporate_tree(std::size_t n_outputs, double f0, const msline::Substrate &sub, double z_ref = 50.0,
                                     double section_loss_db = 0.0) {
    if (n_outputs < 2 || !std::has_single_bit(n_outputs)) {
        std::string msg = "n_outputs = " + std::to_string(n_outputs) + " is not a power of two >= 2; nearest valid ";
        if (n_outputs < 2) {
            msg += "count is 2";
        } else {
            const std::size_t lo = std::bit_floor(n_outputs);
            msg += "counts are " + std::to_string(lo) + " and " + std::to_string(lo * 2);
        }
        throw ArgumentError(msg);
    }
    detail::require_positive(f0, "design frequency");
    sub.validate();
    FeedTree t;
    t.depth = std::countr_zero(n_outputs);
    t.f0 = f0;
    t.z_ref = z_ref;
    t.stages.assign(static_cast<std::size_t>(t.depth), design_stage(f0, sub, z_ref, section_loss_db));
    t.validate();
    return t;
}

// Incident-wave response of the tree with every leaf terminated in z_ref.
struct TreeResponse {
    cplx gamma_in;                  // reflection at the tree input
    std::vector<cplx> leaf_waves;   // wave into each leaf per unit incident wave at the input
};

inline TreeResponse evaluate_tree(const FeedTree &tree, double f) {
    detail::require_positive(f, "frequency");
    if (tree.depth < 1 || static_cast<int>(tree.stages.size()) != tree.depth)
        throw ArgumentError("feed tree stage count inconsistent with depth");
    const auto depth = static_cast<std::size_t>(tree.depth);

    // Reduce from the leaves upward. Subtrees at one level are identical, so a
    // level is summarized by its input reflection and the two arm transfers.
    std::vector<std::array<cplx, 2>> transfer(depth);
    cplx gamma_child = 0.0;
    for (std::size_t level = depth; level-- > 0;) {
        const auto &stage = tree.stages[level];
        std::array<cplx, 2> g_arm{}, t_arm{};
        for (int k = 0; k < 2; ++k) {
            Abcd m = Abcd::Identity();
            for (const auto &seg : stage.arm_segments[k]) m = m * microstrip_abcd(seg, f);
            const Eigen::Matrix2cd s = abcd_to_s(m, tree.z_ref);
            const cplx den = 1.0 - s(1, 1) * gamma_child;
            g_arm[k] = s(0, 0) + s(0, 1) * s(1, 0) * gamma_child / den;
            t_arm[k] = s(1, 0) / den;
        }
        const Matrix3 w = stage.sparams(f, tree.z_ref);
        Eigen::Matrix2cd sys;
        sys << 1.0 - w(1, 1) * g_arm[0], -w(1, 2) * g_arm[1],
               -w(2, 1) * g_arm[0], 1.0 - w(2, 2) * g_arm[1];
        const Eigen::Vector2cd rhs(w(1, 0), w(2, 0));
        const Eigen::Vector2cd b = sys.partialPivLu().solve(rhs);
        gamma_child = w(0, 0) + w(0, 1) * g_arm[0] * b(0) + w(0, 2) * g_arm[1] * b(1);
        transfer[level] = {b(0) * t_arm[0], b(1) * t_arm[1]};
    }

    TreeResponse r;
    r.gamma_in = gamma_child;
    const std::size_t n = tree.n_outputs();
    r.leaf_waves.resize(n);
    for (std::size_t leaf = 0; leaf < n; ++leaf) {
        cplx a = 1.0;
        for (std::size_t level = 0; level < depth; ++level) a *= transfer[level][(leaf >> (depth - 1 - level)) & 1u];
        r.leaf_waves[leaf] = a;
    }
    return r;
}

struct LeafExcitation {
    std::size_t index = 0;
    double amplitude = 0;
    double phase = 0;   // rad

    cplx value() const { return std::polar(amplitude, phase); }
};

inline std::vector<LeafExcitation> leaf_excitations(const FeedTree &tree, double f) {
    const TreeResponse r = evaluate_tree(tree, f);
    std::vector<LeafExcitation> out(r.leaf_waves.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {i, std::abs(r.leaf_waves[i]), std::arg(r.leaf_waves[i])};
    return out;
}

// Lumped connector at the tree input: symmetric reflection plus insertion loss.
struct ConnectorModel {
    double reflection = 0.0;        // |Gamma|
    double insertion_loss_db = 0.0;

    static ConnectorModel from_return_loss(double return_loss_db, double insertion_loss_db = 0.0) {
        return {std::pow(10.0, -return_loss_db / 20.0), insertion_loss_db};
    }

    Eigen::Matrix2cd sparams() const {
        if (!(reflection >= 0.0 && reflection < 1.0)) throw DomainError("connector reflection must lie in [0, 1)");
        if (!(insertion_loss_db >= 0.0)) throw DomainError("connector insertion loss must be >= 0");
        const cplx thru = cplx(0.0, 1.0) * std::sqrt(1.0 - reflection * reflection) *
                          std::pow(10.0, -insertion_loss_db / 20.0);
        Eigen::Matrix2cd s;
        s << reflection, thru, thru, reflection;
        return s;
    }
};

struct LossBudget {
    double frequency = 0;
    double split_db = 0;
    double dissipative_db = 0;
    double mismatch_db = 0;
    double total_db = 0;
};

// Itemizes input-to-leaf power: split is the ideal 1/N division, mismatch the
// power reflected at the input, dissipative whatever is accepted but never
// reaches a leaf.
inline LossBudget network_loss_budget(const FeedTree &tree, double f, const ConnectorModel &connector = {}) {
    const TreeResponse r = evaluate_tree(tree, f);
    const Eigen::Matrix2cd c = connector.sparams();
    const cplx den = 1.0 - c(1, 1) * r.gamma_in;
    const cplx gamma_total = c(0, 0) + c(0, 1) * c(1, 0) * r.gamma_in / den;
    const cplx into_tree = c(1, 0) / den;

    double delivered = 0.0;
    for (const auto &a : r.leaf_waves) delivered += std::norm(a);
    delivered *= std::norm(into_tree);
    const double accepted = 1.0 - std::norm(gamma_total);

    LossBudget b;
    b.frequency = f;
    b.split_db = 10.0 * std::log10(static_cast<double>(tree.n_outputs()));
    b.mismatch_db = std::max(0.0, -10.0 * std::log10(accepted));
    b.dissipative_db = std::max(0.0, -10.0 * std::log10(delivered / accepted));
    b.total_db = b.split_db + b.dissipative_db + b.mismatch_db;
    return b;
}

} // namespace arraysynth::feednet

#endif
