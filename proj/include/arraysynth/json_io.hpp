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

#ifndef ARRAYSYNTH_JSON_IO_HPP
#define ARRAYSYNTH_JSON_IO_HPP

#include "arraysynth/design.hpp"
#include "arraysynth/errors.hpp"
#include "arraysynth/farfield.hpp"
#include "arraysynth/feednet.hpp"
#include "arraysynth/msline.hpp"
#include "arraysynth/optimize.hpp"
#include "arraysynth/unitcell.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

// JSON forms of the domain types and the CLI configuration. Every length is
// in meters, frequencies in Hz, impedances in ohms.

namespace arraysynth::io {

using nlohmann::json;

namespace detail {

inline void check_keys(const json &j, const std::string &where, std::initializer_list<const char *> allowed) {
    if (!j.is_object()) throw ValidationError({where + ": expected a JSON object"});
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    std::vector<std::string> bad;
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key())) bad.push_back(where + ": unknown key '" + it.key() + "'");
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

template <typename T>
void get_to(const json &j, const char *key, T &out, const std::string &where) {
    if (!j.contains(key)) return;
    try {
        j.at(key).get_to(out);
    } catch (const json::exception &) {
        throw ValidationError({where + "." + key + ": wrong type"});
    }
}

template <typename T>
void get_opt(const json &j, const char *key, std::optional<T> &out, const std::string &where) {
    if (!j.contains(key)) return;
    if (j.at(key).is_null()) {
        out.reset();
        return;
    }
    T v{};
    get_to(j, key, v, where);
    out = v;
}

inline json opt_json(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

} // namespace detail

// --- substrates and stacks -------------------------------------------------

inline json to_json(const msline::Substrate &s) {
    return {{"name", s.name},
            {"eps_r", s.eps_r},
            {"tan_delta", s.tan_delta},
            {"height_m", s.height},
            {"conductor_thickness_m", s.conductor_thickness},
            {"conductivity_S_per_m", std::isinf(s.conductivity) ? json(nullptr) : json(s.conductivity)}};
}

inline msline::Substrate substrate_from_json(const json &j, const std::string &where = "substrate") {
    detail::check_keys(j, where, {"name", "eps_r", "tan_delta", "height_m", "conductor_thickness_m", "conductivity_S_per_m"});
    msline::Substrate s;
    detail::get_to(j, "name", s.name, where);
    detail::get_to(j, "eps_r", s.eps_r, where);
    detail::get_to(j, "tan_delta", s.tan_delta, where);
    detail::get_to(j, "height_m", s.height, where);
    detail::get_to(j, "conductor_thickness_m", s.conductor_thickness, where);
    if (j.contains("conductivity_S_per_m") && j.at("conductivity_S_per_m").is_null())
        s.conductivity = std::numeric_limits<double>::infinity();
    else
        detail::get_to(j, "conductivity_S_per_m", s.conductivity, where);
    try {
        s.validate();
    } catch (const DomainError &e) {
        throw ValidationError({where + ": " + e.what()});
    }
    return s;
}

using Catalog = std::map<std::string, msline::Substrate>;

inline Catalog default_catalog() {
    return {{"RO4003C", msline::ro4003c(1.524e-3)}, {"FR-4", msline::fr4(0.1e-3)}};
}

inline json to_json(const unitcell::LayerStack &stack) {
    json a = json::array();
    for (const auto &l : stack) a.push_back({{"role", l.role}, {"top_conductor", l.top_conductor}, {"substrate", to_json(l.substrate)}});
    return a;
}

// A layer's substrate is either inline or a catalog name; `height_m` on the
// layer overrides the catalog thickness.
inline unitcell::LayerStack stack_from_json(const json &j, const Catalog &catalog = default_catalog()) {
    if (!j.is_array() || j.empty()) throw ValidationError({"stack: expected a non-empty array of layers"});
    unitcell::LayerStack out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string where = "stack[" + std::to_string(i) + "]";
        const json &l = j[i];
        detail::check_keys(l, where, {"role", "top_conductor", "substrate", "height_m"});
        unitcell::Layer layer;
        detail::get_to(l, "role", layer.role, where);
        detail::get_to(l, "top_conductor", layer.top_conductor, where);
        if (!l.contains("substrate")) throw ValidationError({where + ": missing substrate"});
        const json &s = l.at("substrate");
        if (s.is_string()) {
            const auto it = catalog.find(s.get<std::string>());
            if (it == catalog.end()) throw ValidationError({where + ": unknown substrate '" + s.get<std::string>() + "'"});
            layer.substrate = it->second;
        } else {
            layer.substrate = substrate_from_json(s, where + ".substrate");
        }
        detail::get_to(l, "height_m", layer.substrate.height, where);
        if (!(layer.substrate.height > 0.0)) throw ValidationError({where + ": height must be > 0"});
        out.push_back(std::move(layer));
    }
    return out;
}

// --- unit cell ---------------------------------------------------------------

inline json to_json(const unitcell::UnitCellGeometry &g) {
    return {{"length_unit", "m"}, {"w1", g.w1}, {"l1", g.l1}, {"dx", g.dx}, {"dy", g.dy}, {"wu", g.wu}, {"lu", g.lu},
            {"ws", g.ws}, {"ls", g.ls}, {"wp", g.wp}, {"lp", g.lp}, {"stack", to_json(g.stack)}};
}

inline unitcell::UnitCellGeometry geometry_from_json(const json &j, const Catalog &catalog = default_catalog()) {
    const std::string where = "unit cell";
    detail::check_keys(j, where, {"length_unit", "w1", "l1", "dx", "dy", "wu", "lu", "ws", "ls", "wp", "lp", "stack"});
    if (j.contains("length_unit") && j.at("length_unit") != "m") throw ValidationError({where + ": length_unit must be \"m\""});
    unitcell::UnitCellGeometry g;
    std::vector<std::string> missing;
    for (auto [key, ref] : {std::pair<const char *, double *>{"w1", &g.w1}, {"l1", &g.l1}, {"dx", &g.dx}, {"dy", &g.dy},
                            {"wu", &g.wu}, {"lu", &g.lu}, {"ws", &g.ws}, {"ls", &g.ls}, {"wp", &g.wp}, {"lp", &g.lp}}) {
        if (!j.contains(key)) missing.push_back(where + ": missing " + key);
        else detail::get_to(j, key, *ref, where);
    }
    if (!missing.empty()) throw ValidationError(std::move(missing));
    g.stack = j.contains("stack") ? stack_from_json(j.at("stack"), catalog) : unitcell::default_stack();
    g.validate();
    return g;
}

inline json to_json(const unitcell::SurrogateParams &p) {
    return {{"f_patch_Hz", p.f_patch}, {"q_patch", p.q_patch}, {"f_ms_Hz", p.f_ms}, {"q_ms", p.q_ms},
            {"k_slot", p.k_slot},      {"k_ms", p.k_ms},       {"z_ref_ohm", p.z_ref}};
}

inline json to_json(const unitcell::Discrepancy &d) {
    return {{"field", d.field}, {"geometry_value_m", d.geometry_value}, {"rule_value_m", d.rule_value}, {"note", d.note}};
}

// --- feed ------------------------------------------------------------------

inline json to_json(const msline::MicrostripLine &l) {
    return {{"width_m", l.width}, {"length_m", l.length}, {"substrate", l.substrate.name}};
}

inline json to_json(const feednet::FeedTree &t) {
    json stages = json::array();
    for (const auto &s : t.stages) {
        json arms = json::array();
        for (const auto &arm : s.arm_segments) {
            json segs = json::array();
            for (const auto &seg : arm) segs.push_back(to_json(seg));
            arms.push_back(std::move(segs));
        }
        stages.push_back({{"section_impedance_ohm", s.section_impedance},
                          {"isolation_resistance_ohm", s.isolation_resistance},
                          {"section_loss_dB", s.section_loss_db},
                          {"quarter_wave", to_json(s.quarter_wave)},
                          {"arm_segments", std::move(arms)}});
    }
    return {{"depth", t.depth}, {"n_outputs", t.n_outputs()}, {"f0_Hz", t.f0}, {"z_ref_ohm", t.z_ref}, {"stages", std::move(stages)}};
}

inline json to_json(const feednet::LossBudget &b) {
    return {{"frequency_Hz", b.frequency}, {"split_dB", b.split_db}, {"dissipative_dB", b.dissipative_db},
            {"mismatch_dB", b.mismatch_db}, {"total_dB", b.total_db}};
}

// --- patterns --------------------------------------------------------------

inline json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const farfield::PatternMetrics &m) {
    return {{"directivity_dBi", m.directivity_dbi},
            {"peak_theta_deg", m.peak_theta * 180.0 / constants::pi},
            {"peak_phi_deg", m.peak_phi * 180.0 / constants::pi},
            {"sll_dB", finite_or_null(m.sll_db)},
            {"hpbw_deg", {{"phi_0", m.hpbw_deg[0]}, {"phi_90", m.hpbw_deg[1]}}},
            {"front_to_back_dB", finite_or_null(m.front_to_back_db)},
            {"front_to_back_infinite", std::isinf(m.front_to_back_db)}};
}

// --- design ------------------------------------------------------------------

inline json to_json(const design::DesignVector &d) {
    json j = json::object();
    for (std::size_t i = 0; i < design::n_params; ++i)
        j[design::parameter_names[i]] = {{"value_m", d.values[i]}, {"lower_m", d.lower[i]}, {"upper_m", d.upper[i]}};
    return j;
}

inline json to_json(const design::Components &c) {
    return {{"s11_dB", c.s11}, {"efficiency", c.efficiency}, {"front_to_back_dB", c.front_to_back}, {"gain_slope_dB_per_GHz", c.gain_slope}};
}

inline json to_json(const design::Evaluation &e) {
    json rows = json::array();
    for (std::size_t i = 0; i < e.freqs.size(); ++i)
        rows.push_back({{"frequency_Hz", e.freqs[i]},
                        {"s11_dB", 20.0 * std::log10(std::abs(e.s11[i]))},
                        {"efficiency", e.efficiency[i]},
                        {"front_to_back_dB", e.front_to_back_db[i]},
                        {"directivity_dBi", e.directivity_dbi[i]},
                        {"budget", to_json(e.budget[i])},
                        {"realized_gain_dBi", e.realized_gain_dbi[i]}});
    return {{"surrogate", to_json(e.surrogate)},
            {"worst_s11_dB", e.worst_s11_db},
            {"min_efficiency", e.min_efficiency},
            {"min_front_to_back_dB", e.min_front_to_back_db},
            {"gain_slope_dB_per_GHz", e.gain_slope_db_per_ghz},
            {"components", to_json(e.components)},
            {"objective", e.scalar},
            {"band", std::move(rows)}};
}

// --- configuration -------------------------------------------------------------

struct Config {
    Catalog substrates = default_catalog();
    unitcell::Band band{10.7e9, 12.7e9};

    struct UnitCell {
        std::optional<double> period = 12.87e-3;     // null: half a free-space wavelength at f_high
        double ms_gap = 0.40e-3;
        std::optional<double> ms_patch_size;
        unitcell::LayerStack stack = unitcell::default_stack();
    } unit_cell;

    struct Feed {
        std::optional<double> f0;                    // null: band center
        double z_ref = 50.0;
        double stage_loss_db = 0.25;
        double connector_return_loss_db = 20.0;
        double connector_insertion_loss_db = 0.0;
    } feed;

    struct Array {
        int m = 32, n = 32;
        std::optional<double> pitch;                 // null: unit-cell period
        std::optional<double> frequency;             // null: band center
        std::string element = "cosine";              // isotropic | cosine
        double q = 1.0;
        double back_level_db = -20.0;
        std::size_t n_theta = 721, n_phi = 1440;
        double element_efficiency = 0.95;
        double s11_db = -15.0;                       // worst-band element reflection assumed by `budget`
        int budget_points = 21;
    } array;

    struct Optimize {
        double s11_target_db = -20.0;
        double efficiency_target = 0.95;
        double fb_target_db = 20.0;
        double gain_slope_target = 0.0;
        design::Weights weights;
        int n_freq = 41;
        std::map<std::string, std::pair<double, double>> bounds;   // overrides of the default box
        std::optional<std::vector<double>> start;                   // null: analytic seed
        double perturbation = 0.0;                   // relative offset applied to the start point
        optimize::Options options = [] {
            optimize::Options o;
            o.max_evals = 200;
            return o;
        }();
    } optimize;

    double period() const { return unit_cell.period.value_or(constants::c0 / (2.0 * band.f_high)); }
    double pitch() const { return array.pitch.value_or(period()); }
    double feed_f0() const { return feed.f0.value_or(band.center()); }
    double pattern_frequency() const { return array.frequency.value_or(band.center()); }

    farfield::ArrayLayout layout() const { return {array.m, array.n, pitch(), pitch()}; }

    farfield::ElementPattern element() const {
        if (array.element == "isotropic") return farfield::ElementPattern::isotropic();
        if (array.element == "cosine") return farfield::ElementPattern::cosine_power(array.q, array.back_level_db);
        throw ValidationError({"array.element must be \"isotropic\" or \"cosine\", got \"" + array.element + "\""});
    }

    feednet::ConnectorModel connector() const {
        return feednet::ConnectorModel::from_return_loss(feed.connector_return_loss_db, feed.connector_insertion_loss_db);
    }

    design::ObjectiveSpec objective_spec() const {
        design::ObjectiveSpec s;
        s.band = band;
        s.s11_target_db = optimize.s11_target_db;
        s.efficiency_target = optimize.efficiency_target;
        s.fb_target_db = optimize.fb_target_db;
        s.gain_slope_target = optimize.gain_slope_target;
        s.weights = optimize.weights;
        s.n_freq = optimize.n_freq;
        return s;
    }

    design::ModelConfig model_config() const {
        design::ModelConfig m;
        m.stack = unit_cell.stack;
        m.layout = layout();
        m.stage_loss_db = feed.stage_loss_db;
        m.connector = connector();
        m.element = element();
        return m;
    }

    design::DesignVector design_bounds() const {
        auto d = design::default_bounds();
        for (const auto &[name, lu] : optimize.bounds) {
            std::size_t i = 0;
            while (i < design::n_params && name != design::parameter_names[i]) ++i;
            if (i == design::n_params) throw ValidationError({"optimize.bounds: unknown parameter '" + name + "'"});
            d.lower[i] = lu.first;
            d.upper[i] = lu.second;
        }
        return d;
    }
};

inline json to_json(const Config &c) {
    json subs = json::object();
    for (const auto &[name, s] : c.substrates) subs[name] = to_json(s);
    json bounds = json::object();
    for (const auto &[name, lu] : c.optimize.bounds) bounds[name] = {lu.first, lu.second};
    const auto &o = c.optimize.options;
    return {
        {"substrates", subs},
        {"band", {{"f_low_Hz", c.band.f_low}, {"f_high_Hz", c.band.f_high}}},
        {"unit_cell",
         {{"period_m", detail::opt_json(c.unit_cell.period)},
          {"ms_gap_m", c.unit_cell.ms_gap},
          {"ms_patch_size_m", detail::opt_json(c.unit_cell.ms_patch_size)},
          {"stack", to_json(c.unit_cell.stack)}}},
        {"feed",
         {{"f0_Hz", detail::opt_json(c.feed.f0)},
          {"z_ref_ohm", c.feed.z_ref},
          {"stage_loss_dB", c.feed.stage_loss_db},
          {"connector_return_loss_dB", c.feed.connector_return_loss_db},
          {"connector_insertion_loss_dB", c.feed.connector_insertion_loss_db}}},
        {"array",
         {{"columns", c.array.m},
          {"rows", c.array.n},
          {"pitch_m", detail::opt_json(c.array.pitch)},
          {"frequency_Hz", detail::opt_json(c.array.frequency)},
          {"element", c.array.element},
          {"cosine_power", c.array.q},
          {"back_level_dB", c.array.back_level_db},
          {"n_theta", c.array.n_theta},
          {"n_phi", c.array.n_phi},
          {"element_efficiency", c.array.element_efficiency},
          {"s11_dB", c.array.s11_db},
          {"budget_points", c.array.budget_points}}},
        {"optimize",
         {{"s11_target_dB", c.optimize.s11_target_db},
          {"efficiency_target", c.optimize.efficiency_target},
          {"fb_target_dB", c.optimize.fb_target_db},
          {"gain_slope_target_dB_per_GHz", c.optimize.gain_slope_target},
          {"weights",
           {{"s11", c.optimize.weights.s11},
            {"efficiency", c.optimize.weights.efficiency},
            {"front_to_back", c.optimize.weights.front_to_back},
            {"gain_slope", c.optimize.weights.gain_slope}}},
          {"n_freq", c.optimize.n_freq},
          {"bounds_m", bounds},
          {"start_m", c.optimize.start ? json(*c.optimize.start) : json(nullptr)},
          {"perturbation", c.optimize.perturbation},
          {"initial_radius", o.initial_radius},
          {"max_radius", o.max_radius},
          {"tol_x", o.tol_x},
          {"tol_f", o.tol_f},
          {"max_evals", o.max_evals},
          {"max_iterations", o.max_iterations},
          {"fd_step", o.fd_step},
          {"parallel_stencil", o.parallel_stencil}}},
    };
}

// Sections and keys left out keep their defaults.
inline Config config_from_json(const json &j) {
    Config c;
    detail::check_keys(j, "config", {"substrates", "band", "unit_cell", "feed", "array", "optimize"});
    if (j.contains("substrates")) {
        const json &s = j.at("substrates");
        if (!s.is_object()) throw ValidationError({"substrates: expected an object keyed by name"});
        for (auto it = s.begin(); it != s.end(); ++it) {
            auto sub = substrate_from_json(it.value(), "substrates." + it.key());
            if (sub.name.empty()) sub.name = it.key();
            c.substrates[it.key()] = sub;
        }
    }
    if (j.contains("band")) {
        const json &b = j.at("band");
        detail::check_keys(b, "band", {"f_low_Hz", "f_high_Hz"});
        detail::get_to(b, "f_low_Hz", c.band.f_low, "band");
        detail::get_to(b, "f_high_Hz", c.band.f_high, "band");
    }
    if (j.contains("unit_cell")) {
        const json &u = j.at("unit_cell");
        detail::check_keys(u, "unit_cell", {"period_m", "ms_gap_m", "ms_patch_size_m", "stack"});
        detail::get_opt(u, "period_m", c.unit_cell.period, "unit_cell");
        detail::get_to(u, "ms_gap_m", c.unit_cell.ms_gap, "unit_cell");
        detail::get_opt(u, "ms_patch_size_m", c.unit_cell.ms_patch_size, "unit_cell");
        if (u.contains("stack")) c.unit_cell.stack = stack_from_json(u.at("stack"), c.substrates);
    }
    if (j.contains("feed")) {
        const json &f = j.at("feed");
        detail::check_keys(f, "feed", {"f0_Hz", "z_ref_ohm", "stage_loss_dB", "connector_return_loss_dB", "connector_insertion_loss_dB"});
        detail::get_opt(f, "f0_Hz", c.feed.f0, "feed");
        detail::get_to(f, "z_ref_ohm", c.feed.z_ref, "feed");
        detail::get_to(f, "stage_loss_dB", c.feed.stage_loss_db, "feed");
        detail::get_to(f, "connector_return_loss_dB", c.feed.connector_return_loss_db, "feed");
        detail::get_to(f, "connector_insertion_loss_dB", c.feed.connector_insertion_loss_db, "feed");
    }
    if (j.contains("array")) {
        const json &a = j.at("array");
        detail::check_keys(a, "array", {"columns", "rows", "pitch_m", "frequency_Hz", "element", "cosine_power", "back_level_dB",
                                        "n_theta", "n_phi", "element_efficiency", "s11_dB", "budget_points"});
        detail::get_to(a, "columns", c.array.m, "array");
        detail::get_to(a, "rows", c.array.n, "array");
        detail::get_opt(a, "pitch_m", c.array.pitch, "array");
        detail::get_opt(a, "frequency_Hz", c.array.frequency, "array");
        detail::get_to(a, "element", c.array.element, "array");
        detail::get_to(a, "cosine_power", c.array.q, "array");
        detail::get_to(a, "back_level_dB", c.array.back_level_db, "array");
        detail::get_to(a, "n_theta", c.array.n_theta, "array");
        detail::get_to(a, "n_phi", c.array.n_phi, "array");
        detail::get_to(a, "element_efficiency", c.array.element_efficiency, "array");
        detail::get_to(a, "s11_dB", c.array.s11_db, "array");
        detail::get_to(a, "budget_points", c.array.budget_points, "array");
    }
    if (j.contains("optimize")) {
        const json &o = j.at("optimize");
        detail::check_keys(o, "optimize", {"s11_target_dB", "efficiency_target", "fb_target_dB", "gain_slope_target_dB_per_GHz",
                                           "weights", "n_freq", "bounds_m", "start_m", "perturbation", "initial_radius",
                                           "max_radius", "tol_x", "tol_f", "max_evals", "max_iterations", "fd_step",
                                           "parallel_stencil"});
        auto &t = c.optimize;
        detail::get_to(o, "s11_target_dB", t.s11_target_db, "optimize");
        detail::get_to(o, "efficiency_target", t.efficiency_target, "optimize");
        detail::get_to(o, "fb_target_dB", t.fb_target_db, "optimize");
        detail::get_to(o, "gain_slope_target_dB_per_GHz", t.gain_slope_target, "optimize");
        if (o.contains("weights")) {
            const json &w = o.at("weights");
            detail::check_keys(w, "optimize.weights", {"s11", "efficiency", "front_to_back", "gain_slope"});
            detail::get_to(w, "s11", t.weights.s11, "optimize.weights");
            detail::get_to(w, "efficiency", t.weights.efficiency, "optimize.weights");
            detail::get_to(w, "front_to_back", t.weights.front_to_back, "optimize.weights");
            detail::get_to(w, "gain_slope", t.weights.gain_slope, "optimize.weights");
        }
        detail::get_to(o, "n_freq", t.n_freq, "optimize");
        if (o.contains("bounds_m")) {
            const json &b = o.at("bounds_m");
            if (!b.is_object()) throw ValidationError({"optimize.bounds_m: expected an object"});
            for (auto it = b.begin(); it != b.end(); ++it) {
                if (!it.value().is_array() || it.value().size() != 2)
                    throw ValidationError({"optimize.bounds_m." + it.key() + ": expected [lower, upper]"});
                t.bounds[it.key()] = {it.value()[0].get<double>(), it.value()[1].get<double>()};
            }
        }
        detail::get_opt(o, "start_m", t.start, "optimize");
        detail::get_to(o, "perturbation", t.perturbation, "optimize");
        detail::get_to(o, "initial_radius", t.options.initial_radius, "optimize");
        detail::get_to(o, "max_radius", t.options.max_radius, "optimize");
        detail::get_to(o, "tol_x", t.options.tol_x, "optimize");
        detail::get_to(o, "tol_f", t.options.tol_f, "optimize");
        detail::get_to(o, "max_evals", t.options.max_evals, "optimize");
        detail::get_to(o, "max_iterations", t.options.max_iterations, "optimize");
        detail::get_to(o, "fd_step", t.options.fd_step, "optimize");
        detail::get_to(o, "parallel_stencil", t.options.parallel_stencil, "optimize");
    }
    std::vector<std::string> v;
    if (!(c.band.f_low > 0.0 && c.band.f_high > c.band.f_low)) v.push_back("band: need 0 < f_low_Hz < f_high_Hz");
    if (c.array.m < 1 || c.array.n < 1) v.push_back("array: columns and rows must be >= 1");
    if (!(c.array.element_efficiency > 0.0 && c.array.element_efficiency <= 1.0)) v.push_back("array.element_efficiency must lie in (0, 1]");
    if (c.array.budget_points < 2) v.push_back("array.budget_points must be >= 2");
    if (!(c.feed.z_ref > 0.0)) v.push_back("feed.z_ref_ohm must be > 0");
    if (!(c.feed.stage_loss_db >= 0.0)) v.push_back("feed.stage_loss_dB must be >= 0");
    if (!(c.feed.connector_return_loss_db > 0.0)) v.push_back("feed.connector_return_loss_dB must be > 0");
    if (c.unit_cell.period && !(*c.unit_cell.period > 0.0)) v.push_back("unit_cell.period_m must be > 0");
    if (!v.empty()) throw ValidationError(std::move(v));
    return c;
}

inline json read_json_file(const std::filesystem::path &p) {
    std::ifstream in(p);
    if (!in) throw ArgumentError("cannot open '" + p.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw ValidationError({p.string() + ": invalid JSON: " + e.what()});
    }
}

inline Config load_config(const std::filesystem::path &p) { return config_from_json(read_json_file(p)); }

} // namespace arraysynth::io

#endif
