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

#include "arraysynth/msline.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace arraysynth;
using namespace arraysynth::msline;
using Catch::Approx;

namespace {

Substrate air(double h) { return {"air", 1.0, 0.0, h, 0.0, std::numeric_limits<double>::infinity()}; }

} // namespace

TEST_CASE("eps_eff closed form")
{
    CHECK(eps_eff(air(1e-3), 3e-3) == Approx(1.0).margin(1e-15));
    // mpmath evaluation in tests/oracles/msline_oracle.py
    CHECK(eps_eff(ro4003c(1.524e-3), 5.04e-3) == Approx(2.743125239764).epsilon(1e-12));
    CHECK(std::abs(eps_eff(ro4003c(1.524e-3), 1.0) - 3.38) < 0.01 * 3.38);
}

TEST_CASE("eps_eff is continuous at w/h = 1")
{
    const auto sub = ro4003c(1e-3);
    const double below = eps_eff(sub, 1e-3 * (1.0 - 1e-12));
    const double above = eps_eff(sub, 1e-3 * (1.0 + 1e-12));
    CHECK(std::abs(below - above) < 1e-10);
}

TEST_CASE("eps_eff rejects non-positive width or height")
{
    CHECK_THROWS_AS(eps_eff(ro4003c(), 0.0), DomainError);
    CHECK_THROWS_AS(eps_eff(ro4003c(), -1e-3), DomainError);
    auto bad = ro4003c();
    bad.height = 0.0;
    CHECK_THROWS_AS(eps_eff(bad, 1e-3), DomainError);
}

TEST_CASE("z0_analyze branch formulas")
{
    CHECK(z0_analyze(air(1e-3), 1e-3) == Approx(126.612792020795).epsilon(1e-12));
    CHECK(z0_analyze(air(1e-3), 8e-3) == Approx(34.592029298963).epsilon(1e-12));
    CHECK(std::abs(z0_analyze(air(1e-3), 1e-3) - 126.6) < 0.1);
    CHECK(std::abs(z0_analyze(air(1e-3), 8e-3) - 34.6) < 0.2);
}

TEST_CASE("width_synthesize round trips through z0_analyze")
{
    const auto feed = ro4003c(0.813e-3);
    const double w50 = width_synthesize(feed, 50.0);
    CHECK(std::abs(z0_analyze(feed, w50) - 50.0) <= 0.01);
    CHECK(w50 == Approx(0.0018958306061).epsilon(1e-6));

    const double w70 = width_synthesize(feed, 70.71);
    CHECK(std::abs(z0_analyze(feed, w70) - 70.71) <= 0.01);
    CHECK(w70 == Approx(0.0010338236208).epsilon(1e-6));

    CHECK(std::abs(width_synthesize(air(1e-3), 126.6) - 1e-3) < 1e-6);
}

TEST_CASE("width_synthesize reports the achievable interval")
{
    const auto feed = ro4003c(0.813e-3);
    try {
        width_synthesize(feed, 1e6);
        FAIL("expected RangeError");
    } catch (const RangeError &e) {
        CHECK(e.lower() == Approx(z0_analyze(feed, feed.height * 100.0)));
        CHECK(e.upper() == Approx(z0_analyze(feed, feed.height / 100.0)));
    }
    CHECK_THROWS_AS(width_synthesize(feed, 1.0), RangeError);
}

TEST_CASE("guided wavelength")
{
    CHECK(guided_wavelength(air(1e-3), 3e-3, 299.792458e6) == Approx(1.0).epsilon(1e-14));
    const double lg = guided_wavelength(ro4003c(1.524e-3), 5.04e-3, 11.7e9);
    CHECK(std::abs(lg - 15.47e-3) < 0.05e-3);
    CHECK(std::abs(lg / 4.0 - 3.87e-3) < 0.02e-3);
    CHECK(lg == Approx(0.015470773329964).epsilon(1e-12));
    CHECK_THROWS_AS(guided_wavelength(ro4003c(), 1e-3, 0.0), DomainError);
}

TEST_CASE("line_loss")
{
    const auto feed = ro4003c(0.813e-3);
    SECTION("lossless limit")
    {
        Substrate ideal = feed;
        ideal.tan_delta = 0.0;
        ideal.conductivity = std::numeric_limits<double>::infinity();
        CHECK(line_loss({1e-3, 0.05, ideal}, 11.7e9) == 0.0);
    }
    SECTION("linear in length")
    {
        const MicrostripLine a{1.9e-3, 0.01, feed};
        MicrostripLine b = a;
        b.length = 0.02;
        CHECK(line_loss(b, 11.7e9) == Approx(2.0 * line_loss(a, 11.7e9)).epsilon(1e-14));
    }
    SECTION("golden value: 50 ohm line, 10 mm, 11.7 GHz")
    {
        const MicrostripLine line{width_synthesize(feed, 50.0), 0.01, feed};
        CHECK(line_loss(line, 11.7e9) == Approx(0.0675930273894).epsilon(1e-6));
    }
}

TEST_CASE("property: eps_eff stays within [1, eps_r]")
{
    std::mt19937_64 rng(20260101);
    std::uniform_real_distribution<double> er(1.0, 12.0), logh(std::log(50e-6), std::log(5e-3)), logu(std::log(0.01), std::log(100.0));
    for (int i = 0; i < 5000; ++i) {
        Substrate s{"r", er(rng), 0.001, std::exp(logh(rng)), 0.0, 5.8e7};
        const double w = s.height * std::exp(logu(rng));
        const double e = eps_eff(s, w);
        REQUIRE(e >= 1.0);
        REQUIRE(e <= s.eps_r);
    }
}

TEST_CASE("property: z0 decreasing in width and synthesis inverts it")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> er(1.0, 10.0), logu(std::log(0.0101), std::log(99.0));
    for (int i = 0; i < 400; ++i) {
        const Substrate s{"r", er(rng), 0.001, 1e-3, 0.0, 5.8e7};
        double prev = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= 200; ++k) {
            const double w = s.height * 0.01 * std::pow(1e4, k / 200.0);
            const double z = z0_analyze(s, w);
            REQUIRE(z < prev);
            prev = z;
        }
        const double w = s.height * std::exp(logu(rng));
        const double z = z0_analyze(s, w);
        REQUIRE(std::abs(z0_analyze(s, width_synthesize(s, z)) - z) <= 0.01);
    }
}

TEST_CASE("property: guided wavelength scales as 1/f and loss adds over segments")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> f(1e9, 40e9), len(0.0, 0.1);
    const auto feed = ro4003c(0.813e-3);
    for (int i = 0; i < 500; ++i) {
        const double f1 = f(rng);
        REQUIRE(guided_wavelength(feed, 1.8e-3, 2.0 * f1) == Approx(guided_wavelength(feed, 1.8e-3, f1) / 2.0).epsilon(1e-14));
        const double l1 = len(rng), l2 = len(rng);
        const double sum = line_loss({1.8e-3, l1, feed}, f1) + line_loss({1.8e-3, l2, feed}, f1);
        REQUIRE(line_loss({1.8e-3, l1 + l2, feed}, f1) == Approx(sum).epsilon(1e-12));
        REQUIRE(line_loss({1.8e-3, l1, feed}, f1) >= 0.0);
    }
}
