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

#ifndef ARRAYSYNTH_GEOMETRY_EXPORT_HPP
#define ARRAYSYNTH_GEOMETRY_EXPORT_HPP

#include "arraysynth/errors.hpp"
#include "arraysynth/farfield.hpp"
#include "arraysynth/msline.hpp"
#include "arraysynth/unitcell.hpp"

#include <json.hpp>

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

// Layered rectangle geometry of the array, in meters, with cell (p, q)
// occupying [p*w1, (p+1)*w1] x [q*l1, (q+1)*l1].

namespace arraysynth::geometry {

inline constexpr int schema_version = 1;
inline constexpr double reference_extent = 410.26e-3;  // quoted overall board size, m

struct Rect {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    bool inside(const Rect &o, double tol = 1e-12) const {
        return x0 >= o.x0 - tol && y0 >= o.y0 - tol && x1 <= o.x1 + tol && y1 <= o.y1 + tol;
    }
};

struct Layer {
    std::string name;   // L1..L4
    std::string role;
    std::vector<Rect> rects;        // copper
    std::optional<Rect> outline;    // set for the slotted ground: copper outline minus `cutouts`
    std::vector<Rect> cutouts;
};

// Feed line under each slot: runs from the cell's lower edge to `length`
// beyond the slot center.
struct FeedStub {
    double width = 0;
    double length = 0;
};

inline FeedStub default_feed_stub(const unitcell::UnitCellGeometry &cell, double f0) {
    const auto &sub = unitcell::layer_substrate(cell.stack, "feed");
    const double w = msline::width_synthesize(sub, 50.0);
    return {w, msline::guided_wavelength(sub, w, f0) / 4.0};
}

struct Document {
    unitcell::UnitCellGeometry cell;
    int columns = 1, rows = 1;
    FeedStub feed;
    double extent_x = 0, extent_y = 0;
    std::vector<Layer> layers;
    std::vector<std::string> notes;
};

inline Document export_geometry(const unitcell::UnitCellGeometry &cell, const farfield::ArrayLayout &layout, FeedStub feed) {
    cell.validate();
    layout.validate();
    if (std::abs(layout.dx - cell.w1) > 1e-9 * cell.w1 || std::abs(layout.dy - cell.l1) > 1e-9 * cell.l1)
        throw ArgumentError("array pitch (" + std::to_string(layout.dx) + ", " + std::to_string(layout.dy) +
                            ") differs from the cell period (" + std::to_string(cell.w1) + ", " + std::to_string(cell.l1) + ")");
    detail::require_positive(feed.width, "feed width");
    detail::require_positive(feed.length, "feed length");
    if (feed.width > cell.w1 || 0.5 * cell.l1 + feed.length > cell.l1)
        throw ValidationError({"feed stub does not fit inside the cell"});

    Document d;
    d.cell = cell;
    d.columns = layout.m;
    d.rows = layout.n;
    d.feed = feed;
    d.extent_x = layout.m * cell.w1;
    d.extent_y = layout.n * cell.l1;

    Layer l1{"L1", "metasurface", {}, {}, {}}, l2{"L2", "patch", {}, {}, {}}, l3{"L3", "slotted ground", {}, {}, {}},
        l4{"L4", "feed", {}, {}, {}};
    l3.outline = Rect{0.0, 0.0, d.extent_x, d.extent_y};
    const double gx = 4.0 * cell.wu + 3.0 * cell.dx, gy = 4.0 * cell.lu + 3.0 * cell.dy;
    for (int q = 0; q < layout.n; ++q) {
        for (int p = 0; p < layout.m; ++p) {
            const double x = p * cell.w1, y = q * cell.l1;
            const double cx = x + 0.5 * cell.w1, cy = y + 0.5 * cell.l1;
            const double ox = x + 0.5 * (cell.w1 - gx), oy = y + 0.5 * (cell.l1 - gy);
            for (int j = 0; j < 4; ++j)
                for (int i = 0; i < 4; ++i) {
                    const double rx = ox + i * (cell.wu + cell.dx), ry = oy + j * (cell.lu + cell.dy);
                    l1.rects.push_back({rx, ry, rx + cell.wu, ry + cell.lu});
                }
            l2.rects.push_back({cx - 0.5 * cell.wp, cy - 0.5 * cell.lp, cx + 0.5 * cell.wp, cy + 0.5 * cell.lp});
            // cross: one arm ws x ls along x, the other ls x ws along y
            l3.cutouts.push_back({cx - 0.5 * cell.ws, cy - 0.5 * cell.ls, cx + 0.5 * cell.ws, cy + 0.5 * cell.ls});
            l3.cutouts.push_back({cx - 0.5 * cell.ls, cy - 0.5 * cell.ws, cx + 0.5 * cell.ls, cy + 0.5 * cell.ws});
            l4.rects.push_back({cx - 0.5 * feed.width, y, cx + 0.5 * feed.width, cy + feed.length});
        }
    }
    d.layers = {std::move(l1), std::move(l2), std::move(l3), std::move(l4)};

    char buf[200];
    std::snprintf(buf, sizeof buf, "overall extent %.2f mm x %.2f mm (columns x w1, rows x l1)", d.extent_x * 1e3, d.extent_y * 1e3);
    d.notes.emplace_back(buf);
    if (layout.m == 32 && layout.n == 32) {
        std::snprintf(buf, sizeof buf, "reference board outline %.2f mm differs from the computed extent by %.2f mm",
                      reference_extent * 1e3, (d.extent_x - reference_extent) * 1e3);
        d.notes.emplace_back(buf);
    }
    return d;
}

inline nlohmann::json rect_json(const Rect &r) { return nlohmann::json::array({r.x0, r.y0, r.x1, r.y1}); }

inline nlohmann::json to_json(const Document &d) {
    using nlohmann::json;
    json j;
    j["schema_version"] = schema_version;
    j["length_unit"] = "m";
    j["array"] = {{"columns", d.columns}, {"rows", d.rows}, {"pitch_x", d.cell.w1}, {"pitch_y", d.cell.l1}};
    j["extent"] = {{"x", d.extent_x}, {"y", d.extent_y}, {"reference", reference_extent}};
    j["notes"] = d.notes;
    j["rect_format"] = "[x0, y0, x1, y1]";
    json layers = json::array();
    for (const auto &l : d.layers) {
        json jl;
        jl["name"] = l.name;
        jl["role"] = l.role;
        json rs = json::array();
        for (const auto &r : l.rects) rs.push_back(rect_json(r));
        jl["rects"] = std::move(rs);
        if (l.outline) {
            jl["outline"] = rect_json(*l.outline);
            json cs = json::array();
            for (const auto &r : l.cutouts) cs.push_back(rect_json(r));
            jl["cutouts"] = std::move(cs);
        }
        layers.push_back(std::move(jl));
    }
    j["layers"] = std::move(layers);
    return j;
}

inline std::string dump(const Document &d) { return to_json(d).dump(1) + "\n"; }

// Preview of one layer, drawn in millimeters with y pointing up.
inline std::string to_svg(const Document &d, const Layer &layer) {
    std::ostringstream s;
    char buf[256];
    const double w = d.extent_x * 1e3, h = d.extent_y * 1e3;
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 %.4f %.4f\" width=\"%.4fmm\" height=\"%.4fmm\">\n",
                  w, h, w, h);
    s << buf;
    s << "<title>" << layer.name << " " << layer.role << "</title>\n";
    s << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h << "\" fill=\"#f4f1e8\"/>\n";
    s << "<g transform=\"translate(0 " << h << ") scale(1 -1)\" fill=\"#b87333\">\n";
    // Cross arms overlap, so cutouts are painted over the outline rather than
    // punched with a fill rule.
    auto put = [&](const Rect &r, const char *fill) {
        std::snprintf(buf, sizeof buf, "<rect x=\"%.4f\" y=\"%.4f\" width=\"%.4f\" height=\"%.4f\"%s/>\n", r.x0 * 1e3,
                      r.y0 * 1e3, r.width() * 1e3, r.height() * 1e3, fill);
        s << buf;
    };
    if (layer.outline) {
        put(*layer.outline, "");
        for (const auto &c : layer.cutouts) put(c, " fill=\"#f4f1e8\"");
    }
    for (const auto &r : layer.rects) put(r, "");
    s << "</g>\n</svg>\n";
    return s.str();
}

} // namespace arraysynth::geometry

#endif
