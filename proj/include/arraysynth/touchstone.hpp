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

#ifndef ARRAYSYNTH_TOUCHSTONE_HPP
#define ARRAYSYNTH_TOUCHSTONE_HPP

#include "arraysynth/errors.hpp"
#include "arraysynth/sparams.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

// Touchstone v1.1 (.s1p .. .s4p).

namespace arraysynth::io {

enum class NumberFormat { RI, MA, DB };
enum class ParameterType { S, Y, Z };

inline const char *to_string(NumberFormat f) {
    switch (f) {
    case NumberFormat::RI: return "RI";
    case NumberFormat::MA: return "MA";
    case NumberFormat::DB: return "DB";
    }
    return "?";
}

inline NumberFormat parse_number_format(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    if (s == "RI") return NumberFormat::RI;
    if (s == "MA") return NumberFormat::MA;
    if (s == "DB") return NumberFormat::DB;
    throw ArgumentError("unknown number format '" + s + "' (expected RI, MA or DB)");
}

struct OptionLine {
    std::string unit = "GHz";
    double unit_scale = 1e9;
    ParameterType parameter = ParameterType::S;
    NumberFormat format = NumberFormat::MA;
    double resistance = 50.0;
};

struct TouchstoneDocument {
    OptionLine options;
    std::vector<std::string> comments;  // text after '!', in file order
    SParameterBlock block;              // always scattering parameters
};

namespace detail {

inline std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
    return out;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

inline bool to_double(std::string_view tok, double &v) {
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    return ec == std::errc() && ptr == tok.data() + tok.size() && std::isfinite(v);
}

inline OptionLine parse_option_line(std::string_view body, std::size_t line) {
    OptionLine o;
    const auto toks = split_ws(body);
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const std::string t = upper(toks[i]);
        if (t == "HZ") o.unit = "Hz", o.unit_scale = 1.0;
        else if (t == "KHZ") o.unit = "kHz", o.unit_scale = 1e3;
        else if (t == "MHZ") o.unit = "MHz", o.unit_scale = 1e6;
        else if (t == "GHZ") o.unit = "GHz", o.unit_scale = 1e9;
        else if (t == "S") o.parameter = ParameterType::S;
        else if (t == "Y") o.parameter = ParameterType::Y;
        else if (t == "Z") o.parameter = ParameterType::Z;
        else if (t == "RI") o.format = NumberFormat::RI;
        else if (t == "MA") o.format = NumberFormat::MA;
        else if (t == "DB") o.format = NumberFormat::DB;
        else if (t == "R") {
            if (i + 1 >= toks.size() || !to_double(toks[i + 1], o.resistance) || !(o.resistance > 0.0))
                throw ParseError("option line: R must be followed by a positive resistance", line);
            ++i;
        } else if (t == "G" || t == "H") {
            throw ParseError("option line: " + t + " parameters are not supported", line);
        } else {
            throw ParseError("option line: unknown token '" + std::string(toks[i]) + "'", line);
        }
    }
    return o;
}

inline cplx decode(double a, double b, NumberFormat f) {
    switch (f) {
    case NumberFormat::RI: return {a, b};
    case NumberFormat::MA: return std::polar(a, b * constants::pi / 180.0);
    case NumberFormat::DB: return std::polar(std::pow(10.0, a / 20.0), b * constants::pi / 180.0);
    }
    return {};
}

// Index pairs of a record in file order.
inline std::vector<std::pair<int, int>> record_order(int n) {
    std::vector<std::pair<int, int>> order;
    if (n == 2) return {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) order.emplace_back(r, c);
    return order;
}

inline std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace detail

inline TouchstoneDocument parse_touchstone_document(std::string_view text, int n_ports) {
    if (n_ports < 1 || n_ports > 4) throw ArgumentError("touchstone: n_ports must be 1..4, got " + std::to_string(n_ports));
    TouchstoneDocument doc;
    bool have_options = false;
    const std::size_t per_record = 1 + 2 * static_cast<std::size_t>(n_ports) * n_ports;
    const auto order = detail::record_order(n_ports);
    std::vector<double> rec;
    std::size_t rec_line = 0, line_no = 0;

    auto finish_record = [&] {
        const double f = rec[0] * doc.options.unit_scale;
        if (!(f >= 0.0)) throw ParseError("negative frequency", rec_line);
        if (!doc.block.freqs.empty() && !(f > doc.block.freqs.back()))
            throw ParseError("frequencies must be strictly increasing", rec_line);
        Eigen::MatrixXcd m(n_ports, n_ports);
        for (std::size_t k = 0; k < order.size(); ++k)
            m(order[k].first, order[k].second) = detail::decode(rec[1 + 2 * k], rec[2 + 2 * k], doc.options.format);
        const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n_ports, n_ports);
        if (doc.options.parameter == ParameterType::Z) m = (m - id) * (m + id).inverse();
        else if (doc.options.parameter == ParameterType::Y) m = (id - m) * (id + m).inverse();
        doc.block.freqs.push_back(f);
        doc.block.data.push_back(m);
        rec.clear();
    };

    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (const auto bang = line.find('!'); bang != std::string_view::npos) {
            std::string_view c = line.substr(bang + 1);
            if (!c.empty() && c.front() == ' ') c.remove_prefix(1);
            doc.comments.emplace_back(c);
            line = line.substr(0, bang);
        }
        const auto toks = detail::split_ws(line);
        if (toks.empty()) {
            if (eol == text.size()) break;
            continue;
        }
        if (toks[0].front() == '#') {
            if (!rec.empty()) throw ParseError("option line inside a data record", line_no);
            if (!have_options) {
                const auto at = line.find('#');
                doc.options = detail::parse_option_line(line.substr(at + 1), line_no);
                have_options = true;
            }
            continue;
        }
        if (toks[0].front() == '[') throw ParseError("Touchstone 2.0 keywords are not supported", line_no);
        const std::size_t expect = rec.empty() ? 1 + 2 * static_cast<std::size_t>(n_ports) : 2 * static_cast<std::size_t>(n_ports);
        const std::size_t full = n_ports <= 2 ? per_record : expect;
        if (toks.size() != full)
            throw ParseError("expected " + std::to_string(full) + " numbers for a " + std::to_string(n_ports) +
                                 "-port record, found " + std::to_string(toks.size()),
                             line_no);
        if (rec.empty()) rec_line = line_no;
        for (const auto &t : toks) {
            double v;
            if (!detail::to_double(t, v)) throw ParseError("not a number: '" + std::string(t) + "'", line_no);
            rec.push_back(v);
        }
        if (rec.size() == per_record) finish_record();
        if (eol == text.size()) break;
    }
    if (!rec.empty()) throw ParseError("incomplete record at end of file", rec_line);
    if (doc.block.freqs.empty()) throw ParseError("no data records", line_no);
    doc.block.n_ports = n_ports;
    doc.block.z_ref = doc.options.resistance;
    return doc;
}

inline SParameterBlock parse_touchstone(std::string_view text, int n_ports) {
    return parse_touchstone_document(text, n_ports).block;
}

// Port count from a .sNp extension.
inline int ports_from_path(const std::filesystem::path &p) {
    const std::string ext = detail::upper(p.extension().string());
    if (ext.size() == 4 && ext[0] == '.' && ext[1] == 'S' && ext[3] == 'P' && ext[2] >= '1' && ext[2] <= '4') return ext[2] - '0';
    throw ArgumentError("cannot infer port count from '" + p.string() + "' (expected .s1p .. .s4p)");
}

inline std::string read_text(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ArgumentError("cannot open '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline TouchstoneDocument read_touchstone(const std::filesystem::path &p) {
    return parse_touchstone_document(read_text(p), ports_from_path(p));
}

// Numbers are written in shortest round-trip form, so reparsing reproduces
// the block up to the RI/MA/DB conversion.
inline std::string write_touchstone(const SParameterBlock &block, NumberFormat fmt = NumberFormat::RI,
                                    const std::vector<std::string> &comments = {}, const std::string &unit = "GHz") {
    if (block.n_ports > 4) throw ArgumentError("touchstone v1.1 writer supports up to 4 ports, got " + std::to_string(block.n_ports));
    if (block.freqs.empty()) throw ArgumentError("touchstone: empty frequency grid");
    block.validate();
    const OptionLine unit_opt = detail::parse_option_line(unit, 0);
    std::ostringstream out;
    for (const auto &c : comments) out << "! " << c << '\n';
    out << "# " << unit_opt.unit << " S " << to_string(fmt) << " R " << detail::format_number(block.z_ref) << '\n';
    const int n = block.n_ports;
    const auto order = detail::record_order(n);
    for (std::size_t i = 0; i < block.freqs.size(); ++i) {
        out << detail::format_number(block.freqs[i] / unit_opt.unit_scale);
        for (std::size_t k = 0; k < order.size(); ++k) {
            if (n > 2 && k > 0 && k % static_cast<std::size_t>(n) == 0) out << '\n';
            const cplx v = block.data[i](order[k].first, order[k].second);
            double a = v.real(), b = v.imag();
            if (fmt != NumberFormat::RI) {
                a = std::abs(v);
                b = std::arg(v) * 180.0 / constants::pi;
                if (fmt == NumberFormat::DB) a = 20.0 * std::log10(std::max(a, 1e-30));
            }
            out << ' ' << detail::format_number(a) << ' ' << detail::format_number(b);
        }
        out << '\n';
    }
    return out.str();
}

inline void write_touchstone_file(const std::filesystem::path &p, const SParameterBlock &block,
                                  NumberFormat fmt = NumberFormat::RI, const std::vector<std::string> &comments = {}) {
    if (ports_from_path(p) != block.n_ports)
        throw ArgumentError("'" + p.string() + "' extension does not match a " + std::to_string(block.n_ports) + "-port block");
    const std::string text = write_touchstone(block, fmt, comments);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ArgumentError("cannot write '" + p.string() + "'");
    out << text;
}

} // namespace arraysynth::io

#endif
