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

#include "arraysynth/touchstone.hpp"

#include <filesystem>
#include <random>

using namespace arraysynth;
using namespace arraysynth::io;
using Catch::Approx;

namespace {

SParameterBlock random_block(std::mt19937_64 &rng, int n, std::size_t nf) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SParameterBlock b;
    b.n_ports = n;
    b.z_ref = 50.0;
    double f = 1e6 * (2.0 + u(rng));
    for (std::size_t i = 0; i < nf; ++i) {
        f += 1e9 * (0.01 + std::abs(u(rng)));
        b.freqs.push_back(f);
        Eigen::MatrixXcd m(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) m(r, c) = {u(rng), u(rng)};
        b.data.push_back(m);
    }
    return b;
}

double max_diff(const SParameterBlock &a, const SParameterBlock &b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, (a.data[i] - b.data[i]).cwiseAbs().maxCoeff());
    return d;
}

} // namespace

TEST_CASE("one-port MA record")
{
    const auto b = parse_touchstone("# GHz S MA R 50\n11.7 0.1 -90\n", 1);
    REQUIRE(b.size() == 1);
    CHECK(b.n_ports == 1);
    CHECK(b.freqs[0] == Approx(1.17e10).epsilon(1e-15));
    CHECK(std::abs(b.data[0](0, 0) - cplx(0.0, -0.1)) < 1e-15);
    CHECK(b.z_ref == 50.0);
}

TEST_CASE("writer output")
{
    const auto b = single_frequency_block(11.7e9, Eigen::MatrixXcd::Constant(1, 1, cplx(0.0, -0.1)), 50.0);
    const std::string text = write_touchstone(b, NumberFormat::DB);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    const auto lines = io::detail::split_ws(text.substr(text.find('\n') + 1));
    REQUIRE(lines.size() == 3);
    double db = 0, deg = 0;
    REQUIRE(io::detail::to_double(lines[1], db));
    REQUIRE(io::detail::to_double(lines[2], deg));
    CHECK(db == Approx(-20.0).margin(1e-12));
    CHECK(deg == Approx(-90.0).margin(1e-12));
    CHECK(text.rfind("# GHz S DB R 50\n", 0) == 0);

    SParameterBlock empty;
    empty.n_ports = 1;
    CHECK_THROWS_AS(write_touchstone(empty), ArgumentError);
    SParameterBlock five = single_frequency_block(1e9, Eigen::MatrixXcd::Zero(5, 5), 50.0);
    CHECK_THROWS_AS(write_touchstone(five), ArgumentError);
}

TEST_CASE("two-port column order")
{
    const auto b = parse_touchstone("! test\n# MHz S RI R 75\n100 1 0 2 0 3 0 4 0\n200 5 0 6 0 7 0 8 0\n", 2);
    CHECK(b.freqs[1] == 2e8);
    CHECK(b.z_ref == 75.0);
    CHECK(b.data[0](0, 0).real() == 1.0);
    CHECK(b.data[0](1, 0).real() == 2.0);
    CHECK(b.data[0](0, 1).real() == 3.0);
    CHECK(b.data[0](1, 1).real() == 4.0);
}

TEST_CASE("three- and four-port records span lines")
{
    const std::string s3 = "# Hz S RI R 50\n"
                           "1e9 1 0 2 0 3 0\n"
                           "    4 0 5 0 6 0 ! row 2\n"
                           "    7 0 8 0 9 0\n";
    const auto b = parse_touchstone(s3, 3);
    CHECK(b.data[0](0, 1).real() == 2.0);
    CHECK(b.data[0](1, 0).real() == 4.0);
    CHECK(b.data[0](2, 2).real() == 9.0);
    CHECK_THROWS_AS(parse_touchstone("# Hz S RI R 50\n1e9 1 0 2 0 3 0 4 0 5 0 6 0 7 0 8 0 9 0\n", 3), ParseError);
}

TEST_CASE("parse errors carry line numbers")
{
    try {
        parse_touchstone("# GHz S RI R 50\n1.0 0.1 0 0.9 0 0.9 0 0.1 0\n2.0 0.5\n", 2);
        FAIL("expected ParseError");
    } catch (const ParseError &e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    try {
        parse_touchstone("# GHz S RI R 50\n2.0 0.1 0\n1.0 0.1 0\n", 1);
        FAIL("expected ParseError");
    } catch (const ParseError &e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_touchstone("# GHz Q RI R 50\n1 0 0\n", 1), ParseError);
    CHECK_THROWS_AS(parse_touchstone("# GHz S RI R\n1 0 0\n", 1), ParseError);
    CHECK_THROWS_AS(parse_touchstone("# GHz S RI R 50\n1 x 0\n", 1), ParseError);
    CHECK_THROWS_AS(parse_touchstone("! nothing\n", 1), ParseError);
    CHECK_THROWS_AS(parse_touchstone("1 0 0\n", 5), ArgumentError);
}

TEST_CASE("option line defaults and Z/Y data")
{
    // no option line: GHz S MA R 50
    const auto d = parse_touchstone("1 0.5 180\n", 1);
    CHECK(d.freqs[0] == 1e9);
    CHECK(std::abs(d.data[0](0, 0) + 0.5) < 1e-15);

    // normalized z = 3 -> S = 0.5; y = 3 -> S = -0.5
    CHECK(std::abs(parse_touchstone("# Hz Z RI R 50\n1e9 3 0\n", 1).data[0](0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(parse_touchstone("# Hz Y RI R 50\n1e9 3 0\n", 1).data[0](0, 0) + 0.5) < 1e-15);
}

TEST_CASE("property: round trip in every format")
{
    std::mt19937_64 rng(1);
    for (int n = 1; n <= 4; ++n)
        for (auto fmt : {NumberFormat::RI, NumberFormat::MA, NumberFormat::DB})
            for (int trial = 0; trial < 20; ++trial) {
                const auto b = random_block(rng, n, 1 + trial);
                const auto back = parse_touchstone(write_touchstone(b, fmt), n);
                REQUIRE(back.size() == b.size());
                for (std::size_t i = 0; i < b.size(); ++i) REQUIRE(back.freqs[i] == Approx(b.freqs[i]).epsilon(1e-15));
                REQUIRE(max_diff(b, back) < 1e-12);
            }
}

TEST_CASE("comments survive a file round trip")
{
    std::mt19937_64 rng(2);
    const auto b = random_block(rng, 2, 4);
    const auto dir = std::filesystem::temp_directory_path() / "arraysynth_touchstone_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "net.s2p";
    write_touchstone_file(path, b, NumberFormat::MA, {"first", "second line"});
    const auto doc = read_touchstone(path);
    CHECK(doc.comments == std::vector<std::string>{"first", "second line"});
    CHECK(doc.options.format == NumberFormat::MA);
    CHECK(max_diff(b, doc.block) < 1e-12);
    CHECK_THROWS_AS(write_touchstone_file(dir / "net.s3p", b), ArgumentError);
    CHECK_THROWS_AS(ports_from_path("net.txt"), ArgumentError);
    std::filesystem::remove_all(dir);
}
