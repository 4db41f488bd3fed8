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

#include "arraysynth/geometry_export.hpp"
#include "arraysynth/json_io.hpp"

#include <filesystem>

using namespace arraysynth;
using namespace arraysynth::geometry;
using Catch::Approx;

namespace {

const Layer &layer(const Document &d, const std::string &name) {
    for (const auto &l : d.layers)
        if (l.name == name) return l;
    throw std::runtime_error("missing layer " + name);
}

Document reference_doc(int m, int n) {
    const auto cell = unitcell::reference_cell();
    return export_geometry(cell, {m, n, cell.w1, cell.l1}, default_feed_stub(cell, 11.7e9));
}

} // namespace

TEST_CASE("single cell layers")
{
    const auto d = reference_doc(1, 1);
    REQUIRE(d.layers.size() == 4);
    CHECK(layer(d, "L1").rects.size() == 16);
    CHECK(layer(d, "L2").rects.size() == 1);
    CHECK(layer(d, "L3").rects.empty());
    CHECK(layer(d, "L3").cutouts.size() == 2);
    CHECK(layer(d, "L4").rects.size() == 1);

    const auto &arms = layer(d, "L3").cutouts;
    CHECK(arms[0].width() == Approx(2.04e-3).epsilon(1e-12));
    CHECK(arms[0].height() == Approx(0.15e-3).epsilon(1e-12));
    CHECK(arms[1].width() == Approx(0.15e-3).epsilon(1e-12));
    CHECK(arms[1].height() == Approx(2.04e-3).epsilon(1e-12));

    const auto &ms = layer(d, "L1").rects;
    for (const auto &r : ms) {
        CHECK(r.width() == Approx(2.37e-3).epsilon(1e-12));
        CHECK(r.height() == Approx(2.37e-3).epsilon(1e-12));
    }
    CHECK(ms[1].x0 - ms[0].x1 == Approx(0.40e-3).epsilon(1e-9));
}

TEST_CASE("full array extent and bounds")
{
    const auto d = reference_doc(32, 32);
    CHECK(d.extent_x == Approx(411.84e-3).epsilon(1e-12));
    CHECK(d.extent_y == Approx(411.84e-3).epsilon(1e-12));
    CHECK(layer(d, "L1").rects.size() == 16u * 1024u);
    bool noted = false;
    for (const auto &n : d.notes) noted = noted || n.find("410.26") != std::string::npos;
    CHECK(noted);

    const Rect board{0.0, 0.0, d.extent_x, d.extent_y};
    const auto &cell = d.cell;
    for (const auto &l : d.layers) {
        for (std::size_t k = 0; k < l.rects.size(); ++k) {
            const auto &r = l.rects[k];
            REQUIRE(r.inside(board));
            // each rectangle stays inside the cell it belongs to
            const double cx = 0.5 * (r.x0 + r.x1), cy = 0.5 * (r.y0 + r.y1);
            const int p = static_cast<int>(cx / cell.w1), q = static_cast<int>(cy / cell.l1);
            REQUIRE(r.inside({p * cell.w1, q * cell.l1, (p + 1) * cell.w1, (q + 1) * cell.l1}));
        }
        for (const auto &c : l.cutouts) REQUIRE(c.inside(*l.outline));
    }
}

TEST_CASE("export is deterministic")
{
    const auto a = dump(reference_doc(4, 4));
    const auto b = dump(reference_doc(4, 4));
    CHECK(a == b);
    const auto j = nlohmann::json::parse(a);
    CHECK(j["schema_version"] == schema_version);
    CHECK(j["length_unit"] == "m");
    CHECK(j["layers"].size() == 4);
    const auto d = reference_doc(2, 2);
    CHECK(to_svg(d, d.layers[0]) == to_svg(reference_doc(2, 2), reference_doc(2, 2).layers[0]));
    CHECK(to_svg(d, d.layers[2]).find("<svg") == 0);
}

TEST_CASE("export rejects invalid input")
{
    auto cell = unitcell::reference_cell();
    cell.wu = 3.2e-3;
    CHECK_THROWS_AS(export_geometry(cell, {1, 1, cell.w1, cell.l1}, {1e-3, 1e-3}), ValidationError);
    const auto ok = unitcell::reference_cell();
    CHECK_THROWS_AS(export_geometry(ok, {1, 1, 11e-3, 11e-3}, {1e-3, 1e-3}), ArgumentError);
    CHECK_THROWS_AS(export_geometry(ok, {1, 1, ok.w1, ok.l1}, {1e-3, 8e-3}), ValidationError);
}

TEST_CASE("unit cell JSON round trip")
{
    const auto g = unitcell::reference_cell();
    const auto j = io::to_json(g);
    const auto back = io::geometry_from_json(j);
    CHECK(back.w1 == g.w1);
    CHECK(back.ls == g.ls);
    CHECK(back.stack.size() == g.stack.size());
    CHECK(back.stack[4].substrate.height == g.stack[4].substrate.height);
    CHECK(io::to_json(back) == j);

    auto bad = j;
    bad["wu"] = 4e-3;
    CHECK_THROWS_AS(io::geometry_from_json(bad), ValidationError);
    bad = j;
    bad["length_unit"] = "mm";
    CHECK_THROWS_AS(io::geometry_from_json(bad), ValidationError);
    bad = j;
    bad.erase("lp");
    CHECK_THROWS_AS(io::geometry_from_json(bad), ValidationError);
}

TEST_CASE("bundled fixtures")
{
    const std::filesystem::path data = ARRAYSYNTH_DATA_DIR;
    const auto g = io::geometry_from_json(io::read_json_file(data / "reference_unitcell.json"));
    const auto ref = unitcell::reference_cell();
    CHECK(g.w1 == ref.w1);
    CHECK(g.wp == ref.wp);
    CHECK(g.ws == ref.ws);
    CHECK(g.dx == ref.dx);

    const auto cfg = io::load_config(data / "default_config.json");
    CHECK(io::to_json(cfg) == io::to_json(io::Config{}));

    const auto subs = io::read_json_file(data / "substrates.json");
    for (auto it = subs.begin(); it != subs.end(); ++it) CHECK_NOTHROW(io::substrate_from_json(it.value()));
}

TEST_CASE("config parsing")
{
    using nlohmann::json;
    const auto c = io::config_from_json(json::parse(R"({"band": {"f_low_Hz": 9e9, "f_high_Hz": 10e9},
        "unit_cell": {"period_m": null},
        "array": {"columns": 8, "rows": 4, "element": "isotropic"},
        "optimize": {"bounds_m": {"wu": [1e-3, 2e-3]}, "max_evals": 50}})"));
    CHECK(c.band.f_low == 9e9);
    CHECK(c.period() == Approx(constants::c0 / 20e9));
    CHECK(c.layout().m == 8);
    CHECK(c.element().kind == farfield::ElementPattern::Kind::isotropic);
    CHECK(c.design_bounds().upper[design::wu] == 2e-3);
    CHECK(c.optimize.options.max_evals == 50);
    CHECK(io::to_json(io::config_from_json(io::to_json(c))) == io::to_json(c));

    CHECK_THROWS_AS(io::config_from_json(json::parse(R"({"bands": {}})")), ValidationError);
    CHECK_THROWS_AS(io::config_from_json(json::parse(R"({"array": {"colums": 3}})")), ValidationError);
    CHECK_THROWS_AS(io::config_from_json(json::parse(R"({"band": {"f_low_Hz": 2e9, "f_high_Hz": 1e9}})")), ValidationError);
    CHECK_THROWS_AS(io::config_from_json(json::parse(R"({"array": {"rows": "many"}})")), ValidationError);
    CHECK_THROWS_AS(io::config_from_json(json::parse(R"({"optimize": {"bounds_m": {"nope": [0, 1]}}})")).design_bounds(),
                    ValidationError);
    CHECK_THROWS_AS(io::config_from_json(json::parse(R"({"unit_cell": {"stack": [{"role": "patch", "substrate": "RT5880"}]}})")),
                    ValidationError);
}

TEST_CASE("feed tree JSON")
{
    const auto t = feednet::build_corporate_tree(8, 11.7e9, msline::ro4003c(0.813e-3));
    const auto j = io::to_json(t);
    CHECK(j["depth"] == 3);
    CHECK(j["n_outputs"] == 8);
    CHECK(j["stages"][0]["isolation_resistance_ohm"] == 100.0);
}
