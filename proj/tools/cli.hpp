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

#ifndef ARRAYSYNTH_TOOLS_CLI_HPP
#define ARRAYSYNTH_TOOLS_CLI_HPP

#include "arraysynth/design.hpp"
#include "arraysynth/farfield.hpp"
#include "arraysynth/feednet.hpp"
#include "arraysynth/geometry_export.hpp"
#include "arraysynth/json_io.hpp"
#include "arraysynth/touchstone.hpp"
#include "arraysynth/unitcell.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace arraysynth::cli {

namespace fs = std::filesystem;
using nlohmann::json;

struct Context {
    io::Config config;
    fs::path out;
    std::ostream &log;
};

inline void write_file(const fs::path &p, const std::string &text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw ArgumentError("cannot write '" + p.string() + "'");
    f << text;
}

inline std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// dB-vs-angle polyline for the principal cuts.
inline std::string cut_svg(const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> &cuts, double floor_db) {
    const double w = 720, h = 360, x0 = 50, y0 = 20, pw = w - 70, ph = h - 60;
    const char *colors[] = {"#1f4e79", "#b03a2e", "#1e8449", "#7d3c98"};
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double db = floor_db * k / 4.0, y = y0 + ph * k / 4.0;
        s << "<line x1=\"" << x0 << "\" x2=\"" << x0 + pw << "\" y1=\"" << y << "\" y2=\"" << y << "\" stroke=\"#ddd\"/>";
        s << "<text x=\"" << x0 - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << fmt("%.0f", db) << "</text>\n";
    }
    for (int k = 0; k <= 6; ++k) {
        const double deg = -90.0 + 30.0 * k, x = x0 + pw * k / 6.0;
        s << "<text x=\"" << x << "\" y=\"" << y0 + ph + 16 << "\" text-anchor=\"middle\">" << fmt("%.0f", deg) << "</text>\n";
    }
    s << "<text x=\"" << x0 + pw / 2 << "\" y=\"" << h - 8 << "\" text-anchor=\"middle\">theta (deg)</text>\n";
    for (std::size_t c = 0; c < cuts.size(); ++c) {
        s << "<polyline fill=\"none\" stroke=\"" << colors[c % 4] << "\" stroke-width=\"1\" points=\"";
        for (const auto &[deg, db] : cuts[c].second) {
            const double x = x0 + pw * (deg + 90.0) / 180.0;
            const double y = y0 + ph * std::min(1.0, std::max(0.0, db / floor_db));
            s << fmt("%.2f", x) << ',' << fmt("%.2f", y) << ' ';
        }
        s << "\"/>\n<text x=\"" << x0 + pw - 4 << "\" y=\"" << y0 + 14 + 14 * c << "\" text-anchor=\"end\" fill=\"" << colors[c % 4]
          << "\">" << cuts[c].first << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

// --- subcommands -------------------------------------------------------------

inline void synth_unitcell_cmd(Context &ctx) {
    const auto &c = ctx.config;
    unitcell::SynthOptions opt;
    opt.period = c.unit_cell.period;
    opt.ms_gap = c.unit_cell.ms_gap;
    opt.ms_patch_size = c.unit_cell.ms_patch_size;
    const auto g = unitcell::synth_unitcell(c.band, c.unit_cell.stack, opt);
    const double fc = c.band.center();
    const auto &ms = unitcell::layer_substrate(g.stack, "metasurface");

    auto ref = unitcell::reference_cell();
    const auto discrepancies = unitcell::rule_discrepancies(ref, fc);
    json jd = json::array();
    for (const auto &d : discrepancies) jd.push_back(io::to_json(d));

    const double ee = msline::eps_eff(unitcell::layer_substrate(g.stack, "patch"), g.wp);
    json report = {
        {"band", {{"f_low_Hz", c.band.f_low}, {"f_high_Hz", c.band.f_high}, {"center_Hz", fc}}},
        {"synthesized", io::to_json(g)},
        {"rules",
         {{"patch_eps_eff", ee},
          {"patch_length_m", g.lp},
          {"aperture_length_m", g.ws},
          {"aperture_width_m", g.ls},
          {"metasurface_resonance_Hz", unitcell::sievenpiper_resonance(g.wu, g.dx, ms.height, ms.eps_r)}}},
        {"reference",
         {{"geometry", io::to_json(ref)},
          {"metasurface_resonance_Hz",
           unitcell::sievenpiper_resonance(ref.wu, ref.dx, unitcell::layer_substrate(ref.stack, "metasurface").height,
                                           unitcell::layer_substrate(ref.stack, "metasurface").eps_r)},
          {"patch_resonance_unloaded_Hz",
           unitcell::patch_resonant_frequency(ref.lp, msline::eps_eff(unitcell::layer_substrate(ref.stack, "patch"), ref.wp))},
          {"discrepancies", jd}}},
    };
    write_file(ctx.out / "unitcell.json", report.dump(2) + "\n");
    ctx.log << "unit cell: period " << fmt("%.3f", g.w1 * 1e3) << " mm, patch " << fmt("%.3f", g.lp * 1e3) << " mm, slot "
            << fmt("%.3f", g.ws * 1e3) << " x " << fmt("%.3f", g.ls * 1e3) << " mm, metasurface " << fmt("%.3f", g.wu * 1e3)
            << " mm at gap " << fmt("%.3f", g.dx * 1e3) << " mm\n";
    for (const auto &d : discrepancies)
        ctx.log << "reference cell: " << d.field << " = " << fmt("%.3f", d.geometry_value * 1e3) << " mm, rule gives "
                << fmt("%.3f", d.rule_value * 1e3) << " mm (" << d.note << ")\n";
}

inline feednet::FeedTree config_tree(const io::Config &c) {
    const auto n = c.layout().count();
    if (n < 2 || !std::has_single_bit(n))
        throw ValidationError({"array: columns x rows = " + std::to_string(n) + " is not a power of two >= 2"});
    return feednet::build_corporate_tree(n, c.feed_f0(), unitcell::layer_substrate(c.unit_cell.stack, "feed"), c.feed.z_ref,
                                         c.feed.stage_loss_db);
}

inline void synth_feed_cmd(Context &ctx) {
    const auto &c = ctx.config;
    const auto tree = config_tree(c);
    const double f0 = c.feed_f0();
    const auto leaves = feednet::leaf_excitations(tree, f0);
    double amin = 1e300, amax = 0.0;
    for (const auto &l : leaves) amin = std::min(amin, l.amplitude), amax = std::max(amax, l.amplitude);

    json j = io::to_json(tree);
    j["leaves_at_f0"] = {{"count", leaves.size()},
                         {"amplitude_min", amin},
                         {"amplitude_max", amax},
                         {"power_dB", 20.0 * std::log10(amax)},
                         {"phase_rad", leaves.front().phase}};
    write_file(ctx.out / "feed_tree.json", j.dump(2) + "\n");

    // One divider stage across the band.
    SParameterBlock block;
    block.n_ports = 3;
    block.z_ref = c.feed.z_ref;
    const auto freqs = design::band_grid(c.band, c.array.budget_points);
    for (double f : freqs) {
        block.freqs.push_back(f);
        block.data.push_back(tree.stages.front().sparams(f, c.feed.z_ref));
    }
    io::write_touchstone_file(ctx.out / "wilkinson.s3p", block, io::NumberFormat::RI, {"Wilkinson stage, microstrip quarter-wave arms"});
    ctx.log << "feed: " << tree.depth << " stages, " << tree.n_outputs() << " outputs, section "
            << fmt("%.2f", tree.stages[0].section_impedance) << " ohm, resistor " << fmt("%.1f", tree.stages[0].isolation_resistance)
            << " ohm, leaf power " << fmt("%.2f", 20.0 * std::log10(amax)) << " dB\n";
}

inline farfield::FarFieldPattern config_pattern(const io::Config &c, double f) {
    const auto grid = farfield::make_sphere_grid(c.array.n_theta, c.array.n_phi);
    const std::vector<cplx> a(c.layout().count(), 1.0);
    return farfield::array_factor(c.layout(), a, f, grid, c.element());
}

inline void pattern_cmd(Context &ctx, int decimate) {
    const auto &c = ctx.config;
    const double f = c.pattern_frequency();
    const auto t0 = std::chrono::steady_clock::now();
    const auto pat = config_pattern(c, f);
    const auto m = farfield::pattern_metrics(pat);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const auto layout = c.layout();
    const double lambda = constants::c0 / f;
    const double area = layout.m * layout.dx * layout.n * layout.dy;
    json j = io::to_json(m);
    j["frequency_Hz"] = f;
    j["aperture_directivity_dBi"] = 10.0 * std::log10(4.0 * constants::pi * area / (lambda * lambda));
    j["grid"] = {{"n_theta", pat.theta.size()}, {"n_phi", pat.phi.size()}};
    j["element"] = c.array.element;
    j["elapsed_s"] = secs;
    write_file(ctx.out / "metrics.json", j.dump(2) + "\n");

    double pmax = 0.0;
    for (std::size_t i = 0; i < pat.theta.size(); ++i)
        for (std::size_t jj = 0; jj < pat.phi.size(); ++jj) pmax = std::max(pmax, pat.power(i, jj));
    auto db = [&](double p) { return p > 0.0 ? std::max(-200.0, 10.0 * std::log10(p / pmax)) : -200.0; };

    std::ostringstream csv;
    csv << "theta_deg,phi_deg,power_dB\n";
    const std::size_t step = static_cast<std::size_t>(std::max(1, decimate));
    char buf[96];
    for (std::size_t i = 0; i < pat.theta.size(); i += step)
        for (std::size_t jj = 0; jj < pat.phi.size(); jj += step) {
            std::snprintf(buf, sizeof buf, "%.4f,%.4f,%.4f\n", pat.theta[i] * 180.0 / constants::pi, pat.phi[jj] * 180.0 / constants::pi,
                          db(pat.power(i, jj)));
            csv << buf;
        }
    write_file(ctx.out / "pattern.csv", csv.str());

    std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>> cuts;
    for (int k = 0; k < 2; ++k) {
        const auto cut = farfield::detail::principal_cut(pat, k * constants::pi / 2.0, pmax);
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < cut.t.size(); ++i) pts.emplace_back(cut.t[i] * 180.0 / constants::pi, std::max(-60.0, cut.db[i]));
        cuts.emplace_back(k == 0 ? "phi = 0" : "phi = 90", std::move(pts));
    }
    write_file(ctx.out / "pattern_cuts.svg", cut_svg(cuts, -60.0));
    ctx.log << "pattern at " << fmt("%.3f", f / 1e9) << " GHz: D = " << fmt("%.2f", m.directivity_dbi) << " dBi, SLL "
            << fmt("%.2f", m.sll_db) << " dB, HPBW " << fmt("%.3f", m.hpbw_deg[0]) << " / " << fmt("%.3f", m.hpbw_deg[1])
            << " deg, F/B " << (std::isinf(m.front_to_back_db) ? std::string("inf") : fmt("%.2f", m.front_to_back_db))
            << " dB (" << fmt("%.1f", secs) << " s)\n";
}

struct GainRow {
    double frequency = 0;
    double directivity_dbi = 0;
    double efficiency_db = 0;
    feednet::LossBudget budget;
    double element_mismatch_db = 0;
    double realized_gain_dbi = 0;
};

inline std::vector<GainRow> gain_budget(const io::Config &c) {
    const auto tree = config_tree(c);
    const double s11 = std::pow(10.0, c.array.s11_db / 20.0);
    std::vector<GainRow> rows;
    for (double f : design::band_grid(c.band, c.array.budget_points)) {
        GainRow r;
        r.frequency = f;
        r.directivity_dbi = farfield::directivity(config_pattern(c, f));
        r.efficiency_db = 10.0 * std::log10(c.array.element_efficiency);
        r.budget = feednet::network_loss_budget(tree, f, c.connector());
        r.element_mismatch_db = -10.0 * std::log10(1.0 - s11 * s11);
        r.realized_gain_dbi = farfield::realized_gain(r.directivity_dbi, c.array.element_efficiency, r.budget, s11);
        rows.push_back(r);
    }
    return rows;
}

inline void budget_cmd(Context &ctx) {
    const auto rows = gain_budget(ctx.config);
    std::ostringstream csv;
    csv << "frequency_Hz,split_dB,dissipative_dB,mismatch_dB,total_dB\n";
    char buf[160];
    json jr = json::array();
    double gmin = 1e300;
    for (const auto &r : rows) {
        std::snprintf(buf, sizeof buf, "%.6e,%.6f,%.6f,%.6f,%.6f\n", r.frequency, r.budget.split_db, r.budget.dissipative_db,
                      r.budget.mismatch_db, r.budget.total_db);
        csv << buf;
        jr.push_back({{"frequency_Hz", r.frequency},
                      {"directivity_dBi", r.directivity_dbi},
                      {"element_efficiency_dB", r.efficiency_db},
                      {"feed", io::to_json(r.budget)},
                      {"element_mismatch_dB", r.element_mismatch_db},
                      {"realized_gain_dBi", r.realized_gain_dbi}});
        gmin = std::min(gmin, r.realized_gain_dbi);
    }
    write_file(ctx.out / "budget.csv", csv.str());
    json j = {{"rows", jr},
              {"min_realized_gain_dBi", gmin},
              {"gain_floor_dBi", 27.0},
              {"meets_floor", gmin >= 27.0},
              {"assumptions",
               {{"element_efficiency", ctx.config.array.element_efficiency},
                {"stage_loss_dB", ctx.config.feed.stage_loss_db},
                {"element_s11_dB", ctx.config.array.s11_db},
                {"connector_return_loss_dB", ctx.config.feed.connector_return_loss_db},
                {"connector_insertion_loss_dB", ctx.config.feed.connector_insertion_loss_db}}},
              {"note", "realized = directivity + efficiency - dissipative - mismatch - element mismatch; the 1/N split is not a loss"}};
    write_file(ctx.out / "gain_budget.json", j.dump(2) + "\n");
    ctx.log << "budget: minimum realized gain " << fmt("%.2f", gmin) << " dBi over " << rows.size() << " frequencies\n";
}

inline void optimize_cmd(Context &ctx) {
    const auto &c = ctx.config;
    const design::DesignModel model(c.model_config(), c.objective_spec(), c.design_bounds());
    design::DesignVector x0;
    if (c.optimize.start) {
        x0 = model.with_values(*c.optimize.start);
    } else {
        x0 = design::analytic_seed(model);
    }
    for (auto &v : x0.values) v *= 1.0 + c.optimize.perturbation;
    x0.validate();
    const auto r = design::optimize_design(model, x0, c.optimize.options);

    std::ostringstream csv;
    csv << "iteration,evaluations,objective,accepted,radius,s11_dB,efficiency,front_to_back_dB,gain_slope_dB_per_GHz";
    for (auto name : design::parameter_names) csv << ',' << name << "_m";
    csv << '\n';
    for (const auto &h : r.run.history) {
        const auto comp = model.evaluate(h.x).components;
        char buf[64];
        csv << h.iteration << ',' << h.evaluations;
        std::snprintf(buf, sizeof buf, ",%.10g", h.objective);
        csv << buf << ',' << (h.accepted ? 1 : 0);
        for (double v : {h.radius, comp.s11, comp.efficiency, comp.front_to_back, comp.gain_slope}) {
            std::snprintf(buf, sizeof buf, ",%.10g", v);
            csv << buf;
        }
        for (double v : h.x) {
            std::snprintf(buf, sizeof buf, ",%.10g", v);
            csv << buf;
        }
        csv << '\n';
    }
    write_file(ctx.out / "history.csv", csv.str());

    json j = {{"start", io::to_json(x0)},
              {"best", io::to_json(r.best)},
              {"evaluation", io::to_json(r.evaluation)},
              {"evaluations", r.run.evaluations},
              {"iterations", r.run.iterations},
              {"termination", optimize::to_string(r.run.reason)},
              {"objective", r.run.f_best}};
    write_file(ctx.out / "optimize.json", j.dump(2) + "\n");
    const auto cell = design::to_geometry(r.best, c.unit_cell.stack, c.period());
    json jc = io::to_json(cell);
    json v = json::array();
    for (const auto &s : cell.violations()) v.push_back(s);
    write_file(ctx.out / "best_unitcell.json", json{{"geometry", jc}, {"violations", v}}.dump(2) + "\n");
    ctx.log << "optimize: objective " << fmt("%.6g", r.run.f_best) << " after " << r.run.evaluations << " evaluations ("
            << optimize::to_string(r.run.reason) << "), worst S11 " << fmt("%.2f", r.evaluation.worst_s11_db) << " dB\n";
}

inline void export_cmd(Context &ctx, const std::string &cell_path) {
    const auto &c = ctx.config;
    const auto cell = cell_path.empty() ? unitcell::reference_cell() : io::geometry_from_json(io::read_json_file(cell_path), c.substrates);
    const auto doc = geometry::export_geometry(cell, c.layout(), geometry::default_feed_stub(cell, c.feed_f0()));
    write_file(ctx.out / "geometry.json", geometry::dump(doc));
    for (const auto &l : doc.layers) write_file(ctx.out / (l.name + ".svg"), geometry::to_svg(doc, l));
    ctx.log << "export: " << doc.layers.size() << " layers, extent " << fmt("%.2f", doc.extent_x * 1e3) << " x "
            << fmt("%.2f", doc.extent_y * 1e3) << " mm\n";
    for (const auto &n : doc.notes) ctx.log << "  " << n << '\n';
}

inline void touchstone_convert_cmd(Context &ctx, const std::string &input, const std::string &format) {
    const auto doc = io::read_touchstone(input);
    const auto f = io::parse_number_format(format);
    const fs::path out = ctx.out / fs::path(input).filename();
    if (fs::exists(out) && fs::equivalent(out, input)) throw ArgumentError("refusing to overwrite the input file '" + input + "'");
    io::write_touchstone_file(out, doc.block, f, doc.comments);
    ctx.log << "touchstone: " << doc.block.size() << " frequencies, " << doc.block.n_ports << " ports -> " << out.string() << '\n';
}

// --- entry point -------------------------------------------------------------

// 0 success, 2 invalid input or configuration, 1 anything else.
inline int run(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
    CLI::App app{"arraysynth: aperture-coupled patch array design and analysis"};
    app.require_subcommand(1);
    std::string config_path, out_dir = ".", cell_path, format = "RI", input;
    int decimate = 4;

    auto common = [&](CLI::App *sub) {
        sub->add_option("--config,-c", config_path, "JSON configuration (defaults when omitted)")->check(CLI::ExistingFile);
        sub->add_option("--out,-o", out_dir, "output directory");
    };
    auto *synth_cell = app.add_subcommand("synth-unitcell", "size the patch, slot and metasurface for the band");
    auto *synth_feed = app.add_subcommand("synth-feed", "build the corporate Wilkinson tree");
    auto *pattern = app.add_subcommand("pattern", "array pattern, directivity and cut metrics");
    auto *budget = app.add_subcommand("budget", "feed loss and realized-gain budget across the band");
    auto *opt = app.add_subcommand("optimize", "trust-region design optimization on the surrogate models");
    auto *exp = app.add_subcommand("export", "layered geometry JSON and SVG previews");
    auto *ts = app.add_subcommand("touchstone", "Touchstone utilities");
    ts->require_subcommand(1);
    auto *conv = ts->add_subcommand("convert", "rewrite a .s1p-.s4p file in another number format");
    for (auto *s : {synth_cell, synth_feed, pattern, budget, opt, exp, conv}) common(s);
    pattern->add_option("--decimate", decimate, "write every Nth grid sample to pattern.csv")->check(CLI::PositiveNumber);
    exp->add_option("--cell", cell_path, "unit-cell geometry JSON (default: reference cell)")->check(CLI::ExistingFile);
    conv->add_option("input", input, "Touchstone file")->required()->check(CLI::ExistingFile);
    conv->add_option("--format,-f", format, "RI, MA or DB")->check(CLI::IsMember({"RI", "MA", "DB", "ri", "ma", "db"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        Context ctx{config_path.empty() ? io::Config{} : io::load_config(config_path), out_dir, out};
        fs::create_directories(ctx.out);
        if (*synth_cell) synth_unitcell_cmd(ctx);
        else if (*synth_feed) synth_feed_cmd(ctx);
        else if (*pattern) pattern_cmd(ctx, decimate);
        else if (*budget) budget_cmd(ctx);
        else if (*opt) optimize_cmd(ctx);
        else if (*exp) export_cmd(ctx, cell_path);
        else if (*conv) touchstone_convert_cmd(ctx, input, format);
        return 0;
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace arraysynth::cli

#endif
