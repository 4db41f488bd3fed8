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

#include "arraysynth/design.hpp"

using namespace arraysynth;
using namespace arraysynth::design;
using Catch::Approx;

namespace {

const DesignModel &model() {
    static const DesignModel m({}, {});
    return m;
}

} // namespace

TEST_CASE("equal-ripple prototype")
{
    const auto g = chebyshev_prototype(2, 25.0);
    CHECK(g[1] == Approx(0.48819).margin(1e-4));
    CHECK(g[2] == Approx(0.43621).margin(1e-4));
    CHECK(g[3] == Approx(1.11917).margin(1e-4));
    // 0.5 dB ripple, 3 poles (standard table values)
    const auto g3 = chebyshev_prototype(3, -10.0 * std::log10(1.0 - std::pow(10.0, -0.05)));
    CHECK(g3[1] == Approx(1.5963).margin(1e-3));
    CHECK(g3[2] == Approx(1.0967).margin(1e-3));
    CHECK(g3[3] == Approx(1.5963).margin(1e-3));
    CHECK(g3[4] == 1.0);
}

TEST_CASE("analytic seed meets every goal")
{
    const auto &m = model();
    const auto seed = analytic_seed(m);
    CHECK(seed.violations().empty());
    const auto e = m.evaluate(seed);
    CHECK(e.scalar == 0.0);
    CHECK(e.components.s11 == 0.0);
    CHECK(e.components.efficiency == 0.0);
    CHECK(e.components.front_to_back == 0.0);
    CHECK(e.components.gain_slope == 0.0);
    CHECK(e.worst_s11_db < -20.0);
    CHECK(e.min_efficiency > 0.95);
    CHECK(e.min_front_to_back_db > 20.0);

    // both resonators at the geometric band center
    const double f0 = std::sqrt(10.7e9 * 12.7e9);
    CHECK(e.surrogate.f_patch == Approx(f0).epsilon(1e-9));
    CHECK(e.surrogate.f_ms == Approx(f0).epsilon(1e-9));
    CHECK(e.surrogate.q_ms == Approx(2.8455).epsilon(1e-4));
    CHECK(e.surrogate.k_slot == Approx(1.0 / 2.8455).epsilon(1e-4));
    CHECK(e.surrogate.k_ms == Approx(0.37178).epsilon(1e-4));

    // the seeded cell is buildable at the reference period
    CHECK(to_geometry(seed, unitcell::default_stack(), 12.87e-3).violations().empty());
    for (double g : e.realized_gain_dbi) CHECK(g >= 27.0);
}

TEST_CASE("objective is monotone in the S11 violation")
{
    const ObjectiveSpec spec;
    Evaluation e;
    e.min_efficiency = 0.99;
    e.min_front_to_back_db = 30.0;
    e.gain_slope_db_per_ghz = 0.5;
    double prev = -1.0;
    for (double worst = -25.0; worst <= -5.0; worst += 1.0) {
        e.worst_s11_db = worst;
        const double s = weighted(score(e, spec), spec.weights);
        if (worst <= -20.0) CHECK(s == 0.0);
        else CHECK(s > prev);
        prev = s;
    }
    e.worst_s11_db = -19.0;
    const double base = weighted(score(e, spec), spec.weights);
    e.worst_s11_db = -18.0;
    CHECK(weighted(score(e, spec), spec.weights) > base);
}

TEST_CASE("objective is continuous around the seed")
{
    const auto &m = model();
    const auto seed = analytic_seed(m);
    auto x = seed;
    for (auto &v : x.values) v *= 1.05;
    const double f = m.objective(x.values);
    CHECK(f > 0.0);
    for (std::size_t i = 0; i < n_params; ++i) {
        auto y = x;
        y.values[i] *= 1.0 + 1e-9;
        CHECK(std::abs(m.objective(y.values) - f) < 1e-5 * (1.0 + f));
    }
}

TEST_CASE("objective rejects points outside the bounds")
{
    const auto &m = model();
    auto x = analytic_seed(m);
    x[wu] = 5e-3;
    CHECK_THROWS_AS(m.objective(x.values), DomainError);
    CHECK_THROWS_AS(m.evaluate(x), ValidationError);
}

TEST_CASE("seed recovery after a +5% perturbation")
{
    const auto &m = model();
    const auto seed = analytic_seed(m);
    auto x0 = seed;
    for (auto &v : x0.values) v *= 1.05;
    optimize::Options opt;
    opt.max_evals = 200;
    const auto r = optimize_design(m, x0, opt);
    CHECK(r.run.f_best == 0.0);
    CHECK(r.run.evaluations <= 200);
    CHECK(r.evaluation.scalar == 0.0);
    for (std::size_t i = 1; i < r.run.history.size(); ++i)
        CHECK(r.run.history[i].objective <= r.run.history[i - 1].objective);
}

TEST_CASE("zero weights end the run immediately")
{
    ObjectiveSpec spec;
    spec.weights = {0.0, 0.0, 0.0, 0.0};
    const DesignModel m({}, spec);
    auto x = default_bounds();
    const auto r = optimize_design(m, x);
    CHECK(r.run.f_best == 0.0);
    CHECK(r.run.iterations <= 1);
    CHECK(r.run.reason == optimize::Termination::target_reached);
}

TEST_CASE("feed line mismatch shows in the budget")
{
    const auto &m = model();
    auto x = analytic_seed(m);
    const auto matched = m.evaluate(x);
    x[feed_width] = 0.6e-3;
    const auto off = m.evaluate(x);
    CHECK(off.budget[20].mismatch_db > matched.budget[20].mismatch_db);
    CHECK(off.realized_gain_dbi[20] < matched.realized_gain_dbi[20]);
}

TEST_CASE("spec validation")
{
    ObjectiveSpec spec;
    spec.weights.s11 = -1.0;
    CHECK_THROWS_AS(DesignModel({}, spec), ValidationError);
    spec = {};
    spec.band = {12e9, 11e9};
    CHECK_THROWS_AS(DesignModel({}, spec), DomainError);
}
