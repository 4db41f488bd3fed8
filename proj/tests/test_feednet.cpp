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

#include <catch2/catch_amalgamated.hpp>

#include "arraysynth/feednet.hpp"

#include <random>

using namespace arraysynth;
using namespace arraysynth::feednet;
using Catch::Approx;

namespace {

// Nodal oracle: two transmission lines from the input node to each output
// node plus the bridging resistor, each stamped by its Y parameters.
Matrix3 nodal_wilkinson(double z_line, double theta, double r, double z0) {
    const cplx j(0.0, 1.0);
    const cplx y_self = -j / (z_line * std::tan(theta));
    const cplx y_mut = j / (z_line * std::sin(theta));
    Matrix3 y = Matrix3::Zero();
    for (int k : {1, 2}) {
        y(0, 0) += y_self;
        y(k, k) += y_self;
        y(0, k) += y_mut;
        y(k, 0) += y_mut;
    }
    y(1, 1) += 1.0 / r;
    y(2, 2) += 1.0 / r;
    y(1, 2) -= 1.0 / r;
    y(2, 1) -= 1.0 / r;
    const Matrix3 id = Matrix3::Identity();
    return (id - z0 * y) * (id + z0 * y).inverse();
}

double leaf_power_db(const LeafExcitation &e) { return 20.0 * std::log10(e.amplitude); }

} // namespace

TEST_CASE("Wilkinson at the design frequency")
{
    const double f0 = 11.7e9;
    const auto b = wilkinson_sparams(f0, f0);
    const auto &s = b.data[0];
    const cplx mj(0.0, -1.0 / std::sqrt(2.0));
    Matrix3 expect;
    expect << 0.0, mj, mj, mj, 0.0, 0.0, mj, 0.0, 0.0;
    CHECK((s - expect).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(std::norm(s(1, 0)) + std::norm(s(2, 0)) == Approx(1.0).margin(1e-9));
    // the isolation resistor absorbs odd-mode power, so the block is never unitary
    CHECK_FALSE(b.lossless);
    CHECK_NOTHROW(b.validate());
}

TEST_CASE("Wilkinson at twice the design frequency")
{
    const double f0 = 5e9;
    const auto s = wilkinson_sparams(2.0 * f0, f0).data[0];
    CHECK(std::abs(std::abs(s(0, 0)) - 1.0 / 3.0) < 1e-6);
    // half-wave arms repeat the two parallel 50 ohm loads: the input sees 25 ohm
    const Abcd half = line_abcd(std::sqrt(2.0) * 50.0, constants::pi);
    const cplx zin = 0.5 * input_impedance(half, 50.0);
    CHECK(std::abs(reflection(zin, 50.0) - s(0, 0)) < 1e-9);
}

TEST_CASE("Wilkinson against nodal oracle")
{
    const double f0 = 11.7e9;
    for (double f : {7e9, 9.3e9, 10.7e9, 11.0e9, 12.7e9, 14.1e9, 19e9}) {
        const auto s = wilkinson_sparams(f, f0).data[0];
        const double theta = 0.5 * constants::pi * f / f0;
        const auto o = nodal_wilkinson(std::sqrt(2.0) * 50.0, theta, 100.0, 50.0);
        REQUIRE((s - o).cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE((s - s.transpose()).cwiseAbs().maxCoeff() < 1e-15);
        // passive: I - S^H S is positive semidefinite
        const Eigen::SelfAdjointEigenSolver<Matrix3> es(Matrix3::Identity() - s.adjoint() * s);
        REQUIRE(es.eigenvalues().minCoeff() > -1e-12);
    }
    CHECK_THROWS_AS(wilkinson_sparams(0.0, f0), DomainError);
    CHECK_THROWS_AS(wilkinson_sparams(f0, -1.0), DomainError);
}

TEST_CASE("Wilkinson section loss")
{
    const auto s = wilkinson_sparams(11.7e9, 11.7e9, 50.0, 0.25).data[0];
    CHECK(20.0 * std::log10(std::abs(s(1, 0))) == Approx(-3.0103 - 0.25).margin(1e-4));
    CHECK(std::abs(s(0, 0)) < 1e-12);
}

TEST_CASE("corporate tree construction")
{
    const auto sub = msline::ro4003c(0.813e-3);
    const auto t = build_corporate_tree(1024, 11.7e9, sub);
    CHECK(t.depth == 10);
    CHECK(t.n_outputs() == 1024);
    CHECK(t.violations().empty());
    for (const auto &st : t.stages) {
        CHECK(st.isolation_resistance == 100.0);
        CHECK(st.section_impedance == Approx(70.7107).epsilon(1e-4));
        CHECK(st.electrical_length(11.7e9) == Approx(constants::pi / 2.0).epsilon(1e-12));
        CHECK(st.quarter_wave.length == Approx(msline::guided_wavelength(sub, st.quarter_wave.width, 11.7e9) / 4.0));
    }
    CHECK(build_corporate_tree(2, 11.7e9, sub).depth == 1);

    try {
        build_corporate_tree(48, 11.7e9, sub);
        FAIL("expected ArgumentError");
    } catch (const ArgumentError &e) {
        const std::string msg = e.what();
        CHECK(msg.find("32") != std::string::npos);
        CHECK(msg.find("64") != std::string::npos);
    }
    CHECK_THROWS_AS(build_corporate_tree(1, 11.7e9, sub), ArgumentError);
    CHECK_THROWS_AS(build_corporate_tree(0, 11.7e9, sub), ArgumentError);

    auto bad = t;
    bad.stages[3].isolation_resistance = 90.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = t;
    bad.stages[0].section_impedance = 72.0;
    CHECK_FALSE(bad.violations().empty());
}

TEST_CASE("leaf excitations of a symmetric tree")
{
    const auto sub = msline::ro4003c(0.813e-3);
    const double f0 = 11.7e9;
    const auto t = build_corporate_tree(1024, f0, sub);
    const auto leaves = leaf_excitations(t, f0);
    REQUIRE(leaves.size() == 1024);
    double lo = 1e9, hi = 0.0;
    for (const auto &e : leaves) {
        CHECK(e.amplitude == Approx(1.0 / 32.0).epsilon(1e-9));
        CHECK(std::abs(std::remainder(e.phase - leaves[0].phase, 2.0 * constants::pi)) < 1e-12);
        lo = std::min(lo, e.amplitude);
        hi = std::max(hi, e.amplitude);
    }
    CHECK(hi / lo == Approx(1.0).margin(1e-12));
    // ten quarter-wave arms: -90 degrees each
    CHECK(std::abs(std::remainder(leaves[0].phase + 10.0 * constants::pi / 2.0, 2.0 * constants::pi)) < 1e-6);

    // off center, every leaf shares one phase
    for (double f : {10.7e9, 12.7e9}) {
        const auto off = leaf_excitations(t, f);
        double amp_lo = 1e9, amp_hi = 0.0;
        for (const auto &e : off) {
            REQUIRE(std::abs(std::remainder(e.phase - off[0].phase, 2.0 * constants::pi)) < 1e-12);
            amp_lo = std::min(amp_lo, e.amplitude);
            amp_hi = std::max(amp_hi, e.amplitude);
        }
        CHECK(amp_hi / amp_lo == Approx(1.0).margin(1e-12));
    }
}

TEST_CASE("per-stage loss accumulates along every path")
{
    const auto sub = msline::ro4003c(0.813e-3);
    const auto t = build_corporate_tree(1024, 11.7e9, sub, 50.0, 0.25);
    for (const auto &e : leaf_excitations(t, 11.7e9))
        REQUIRE(std::abs(leaf_power_db(e) - (-32.60)) < 0.01);
}

TEST_CASE("loss budget")
{
    const auto sub = msline::ro4003c(0.813e-3);
    const double f0 = 11.7e9;
    const auto ideal = build_corporate_tree(1024, f0, sub);
    auto b = network_loss_budget(ideal, f0);
    CHECK(b.split_db == 10.0 * std::log10(1024.0));
    CHECK(b.split_db == Approx(30.10).margin(0.005));
    CHECK(b.dissipative_db == Approx(0.0).margin(1e-9));
    CHECK(b.mismatch_db == Approx(0.0).margin(1e-9));
    CHECK(b.total_db == Approx(30.10).margin(0.005));

    const auto lossy = build_corporate_tree(1024, f0, sub, 50.0, 0.25);
    b = network_loss_budget(lossy, f0);
    CHECK(b.dissipative_db == Approx(2.50).margin(1e-9));

    b = network_loss_budget(ideal, f0, ConnectorModel{0.1, 0.0});
    CHECK(b.mismatch_db == Approx(-10.0 * std::log10(0.99)).margin(1e-9));
    CHECK(b.mismatch_db == Approx(0.044).margin(0.0005));
    CHECK(ConnectorModel::from_return_loss(20.0).reflection == Approx(0.1).epsilon(1e-12));
    CHECK_THROWS_AS(network_loss_budget(ideal, f0, ConnectorModel{1.2, 0.0}), DomainError);

    // connector insertion loss lands in the dissipative term
    b = network_loss_budget(ideal, f0, ConnectorModel{0.0, 0.3});
    CHECK(b.dissipative_db == Approx(0.3).margin(1e-9));
}

TEST_CASE("property: budget terms are non-negative and additive")
{
    const auto sub = msline::ro4003c(0.813e-3);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = std::size_t{1} << (1 + static_cast<int>(u(rng) * 10.0));
        const auto t = build_corporate_tree(n, 11.7e9, sub, 50.0, 0.5 * u(rng));
        const double f = 8e9 + 8e9 * u(rng);
        const auto b = network_loss_budget(t, f, ConnectorModel{0.3 * u(rng), 0.5 * u(rng)});
        REQUIRE(b.dissipative_db >= 0.0);
        REQUIRE(b.mismatch_db >= 0.0);
        REQUIRE(b.split_db == 10.0 * std::log10(static_cast<double>(n)));
        REQUIRE(b.total_db == b.split_db + b.dissipative_db + b.mismatch_db);
    }
}

TEST_CASE("arm segments shift leaf phases")
{
    const auto sub = msline::ro4003c(0.813e-3);
    const double f0 = 11.7e9;
    auto t = build_corporate_tree(4, f0, sub);
    const double w = msline::width_synthesize(sub, 50.0);
    const double lg = msline::guided_wavelength(sub, w, f0);
    // an extra quarter wave of 50 ohm line on the second arm of the root
    t.stages[0].arm_segments[1].push_back({w, lg / 4.0, sub});
    const auto leaves = leaf_excitations(t, f0);
    const double dphi = std::remainder(leaves[2].phase - leaves[0].phase, 2.0 * constants::pi);
    CHECK(dphi == Approx(-constants::pi / 2.0).margin(1e-3));
    CHECK(std::abs(leaves[0].phase - leaves[1].phase) < 1e-12);
    CHECK(leaves[2].amplitude < leaves[0].amplitude);   // conductor and dielectric loss on the extra line
    CHECK(leaves[2].amplitude == Approx(leaves[0].amplitude).epsilon(0.01));
}
