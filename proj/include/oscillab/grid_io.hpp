#pragma once

// Grid files. CSV layout:
//   dim,<d>
//   cells,<n1>[,<n2>]
//   origin,<x1>[,<x2>]
//   spacing,<h>
//   <row of values>     one line per index of axis 0, row-major
// JSON carries the same keys; `values` may be flat or one array per row.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "grid.hpp"

namespace oscillab {

/// Malformed or unreadable grid input. Exit code 2 territory.
struct GridFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {
inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_csv(std::string_view line)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

inline std::string where(const std::string& name, std::size_t line)
{
    return name + ":" + std::to_string(line) + ": ";
}

inline double parse_double(const std::string& tok, const std::string& name, std::size_t line)
{
    // strtod accepts inf/nan spellings; reject non-finite values explicitly
    if (tok.empty()) {
        throw GridFormatError(where(name, line) + "empty field");
    }
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) {
        throw GridFormatError(where(name, line) + "not a number: '" + tok + "'");
    }
    if (!std::isfinite(v)) {
        throw GridFormatError(where(name, line) + "non-finite value: '" + tok + "'");
    }
    return v;
}

inline std::size_t parse_count(const std::string& tok, const std::string& name, std::size_t line)
{
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || p != tok.data() + tok.size() || v == 0) {
        throw GridFormatError(where(name, line) + "expected a positive cell count, got '" + tok + "'");
    }
    return v;
}

inline std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace detail

inline GridFunction read_grid_csv(std::istream& in, const std::string& name = "<input>")
{
    std::string raw;
    std::size_t line_no = 0;
    auto header = [&](const char* key, std::size_t min_fields, std::size_t max_fields) {
        while (std::getline(in, raw)) {
            ++line_no;
            if (!detail::trim(raw).empty()) {
                auto f = detail::split_csv(raw);
                if (f[0] != key) {
                    throw GridFormatError(detail::where(name, line_no) + "expected '" + key + ",...', got '" +
                                          detail::trim(raw) + "'");
                }
                if (f.size() - 1 < min_fields || f.size() - 1 > max_fields) {
                    throw GridFormatError(detail::where(name, line_no) + "wrong number of fields for '" + key + "'");
                }
                f.erase(f.begin());
                return f;
            }
        }
        throw GridFormatError(name + ": unexpected end of file, missing '" + key + "' line");
    };
    const auto dim_f = header("dim", 1, 1);
    const std::size_t dim_line = line_no;
    const auto dim = detail::parse_count(dim_f[0], name, line_no);
    if (dim != 1 && dim != 2) {
        throw GridFormatError(detail::where(name, dim_line) + "dim must be 1 or 2");
    }
    const auto cells_f = header("cells", dim, dim);
    std::array<std::size_t, 2> cells{1, 1};
    for (std::size_t i = 0; i < dim; ++i) {
        cells[i] = detail::parse_count(cells_f[i], name, line_no);
    }
    const auto origin_f = header("origin", dim, dim);
    std::array<double, 2> origin{0.0, 0.0};
    for (std::size_t i = 0; i < dim; ++i) {
        origin[i] = detail::parse_double(origin_f[i], name, line_no);
    }
    const auto spacing_f = header("spacing", 1, 1);
    const double h = detail::parse_double(spacing_f[0], name, line_no);
    if (!(h > 0.0)) {
        throw GridFormatError(detail::where(name, line_no) + "spacing must be positive");
    }
    const GridDomain d(static_cast<int>(dim), origin, cells, h);
    std::vector<double> values;
    values.reserve(d.size());
    std::size_t rows = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (detail::trim(raw).empty()) {
            continue;
        }
        if (rows == cells[0]) {
            throw GridFormatError(detail::where(name, line_no) + "more than " + std::to_string(cells[0]) + " value rows");
        }
        const auto f = detail::split_csv(raw);
        if (f.size() != cells[1]) {
            throw GridFormatError(detail::where(name, line_no) + "expected " + std::to_string(cells[1]) +
                                  " values, got " + std::to_string(f.size()));
        }
        for (const auto& t : f) {
            values.push_back(detail::parse_double(t, name, line_no));
        }
        ++rows;
    }
    if (rows != cells[0]) {
        throw GridFormatError(name + ": expected " + std::to_string(cells[0]) + " value rows, got " +
                              std::to_string(rows));
    }
    return {d, std::move(values)};
}

inline GridFunction read_grid_json(const nlohmann::json& j, const std::string& name = "<input>")
{
    try {
        const int dim = j.at("dim").get<int>();
        if (dim != 1 && dim != 2) {
            throw GridFormatError(name + ": dim must be 1 or 2");
        }
        std::array<std::size_t, 2> cells{1, 1};
        std::array<double, 2> origin{0.0, 0.0};
        const auto& jc = j.at("cells");
        const auto& jo = j.at("origin");
        if (jc.is_number() && dim == 1) {
            cells[0] = jc.get<std::size_t>();
        } else {
            if (jc.size() != static_cast<std::size_t>(dim)) {
                throw GridFormatError(name + ": 'cells' needs " + std::to_string(dim) + " entries");
            }
            for (int i = 0; i < dim; ++i) {
                cells[i] = jc.at(i).get<std::size_t>();
            }
        }
        if (jo.is_number() && dim == 1) {
            origin[0] = jo.get<double>();
        } else {
            if (jo.size() != static_cast<std::size_t>(dim)) {
                throw GridFormatError(name + ": 'origin' needs " + std::to_string(dim) + " entries");
            }
            for (int i = 0; i < dim; ++i) {
                origin[i] = jo.at(i).get<double>();
            }
        }
        const double h = j.at("spacing").get<double>();
        const GridDomain d(dim, origin, cells, h);
        std::vector<double> values;
        values.reserve(d.size());
        for (const auto& v : j.at("values")) {
            if (v.is_array()) {
                if (v.size() != cells[1]) {
                    throw GridFormatError(name + ": value row " + std::to_string(values.size() / cells[1]) +
                                          " has " + std::to_string(v.size()) + " entries");
                }
                for (const auto& x : v) {
                    values.push_back(x.get<double>());
                }
            } else {
                values.push_back(v.get<double>());
            }
        }
        if (values.size() != d.size()) {
            throw GridFormatError(name + ": expected " + std::to_string(d.size()) + " values, got " +
                                  std::to_string(values.size()));
        }
        return {d, std::move(values)};
    } catch (const nlohmann::json::exception& e) {
        throw GridFormatError(name + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw GridFormatError(name + ": " + e.what());
    }
}

/// Reads CSV or JSON; the format is chosen by the first non-blank character.
inline GridFunction read_grid(std::istream& in, const std::string& name = "<input>")
{
    in >> std::ws;
    if (in.peek() == '{') {
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::parse_error& e) {
            throw GridFormatError(name + ": " + e.what());
        }
        return read_grid_json(j, name);
    }
    try {
        return read_grid_csv(in, name);
    } catch (const std::invalid_argument& e) {
        throw GridFormatError(name + ": " + e.what());
    }
}

inline GridFunction read_grid_file(const std::string& path)
{
    if (path == "-") {
        return read_grid(std::cin, "<stdin>");
    }
    std::ifstream f(path);
    if (!f) {
        throw GridFormatError(path + ": cannot open");
    }
    return read_grid(f, path);
}

inline void write_grid_csv(std::ostream& out, const GridFunction& u)
{
    const auto& d = u.domain();
    out << "dim," << d.dim << "\n";
    out << "cells," << d.cells[0];
    if (d.dim == 2) {
        out << "," << d.cells[1];
    }
    out << "\norigin," << detail::format_double(d.origin[0]);
    if (d.dim == 2) {
        out << "," << detail::format_double(d.origin[1]);
    }
    out << "\nspacing," << detail::format_double(d.spacing) << "\n";
    for (std::size_t i = 0; i < d.cells[0]; ++i) {
        for (std::size_t j = 0; j < d.cells[1]; ++j) {
            out << (j ? "," : "") << detail::format_double(u[i * d.cells[1] + j]);
        }
        out << "\n";
    }
}

inline nlohmann::json grid_to_json(const GridFunction& u)
{
    const auto& d = u.domain();
    nlohmann::json j;
    j["dim"] = d.dim;
    if (d.dim == 1) {
        j["cells"] = {d.cells[0]};
        j["origin"] = {d.origin[0]};
    } else {
        j["cells"] = {d.cells[0], d.cells[1]};
        j["origin"] = {d.origin[0], d.origin[1]};
    }
    j["spacing"] = d.spacing;
    j["values"] = u.values();
    return j;
}

/// Region masks use the grid format; nonzero cells are inside.
inline CellMask read_mask_file(const std::string& path, const GridDomain& expected)
{
    const auto m = read_grid_file(path);
    if (!(m.domain() == expected)) {
        throw GridFormatError(path + ": mask grid does not match the input grid");
    }
    std::vector<std::uint8_t> in(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        in[i] = m[i] != 0.0 ? 1 : 0;
    }
    return CellMask(expected, std::move(in));
}

}  // namespace oscillab
