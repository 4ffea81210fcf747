#pragma once

// Machine-readable record of a norm evaluation or inequality check.

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace oscillab {

inline constexpr const char* toolkit_version = "0.3.0";

struct Report {
    std::string op;
    nlohmann::json params = nlohmann::json::object();
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool pass = true;
    double tolerance = 0.0;
    // Optional structured detail (curves, flags, notes).
    nlohmann::json extra = nlohmann::json::object();

    /// Records lhs <= rhs * (1 + tol) + abs_floor.
    static Report inequality(std::string op, double lhs, double rhs, double tol, nlohmann::json params = {},
                             double abs_floor = 0.0)
    {
        Report r;
        r.op = std::move(op);
        r.params = params.is_null() ? nlohmann::json::object() : std::move(params);
        r.lhs = lhs;
        r.rhs = rhs;
        r.ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? INFINITY : 0.0);
        r.tolerance = tol;
        r.pass = std::isfinite(lhs) && lhs <= rhs * (1.0 + tol) + abs_floor;
        return r;
    }

    /// Records |lhs - rhs| <= tol * max(|lhs|, |rhs|).
    static Report equality(std::string op, double lhs, double rhs, double tol, nlohmann::json params = {})
    {
        Report r;
        r.op = std::move(op);
        r.params = params.is_null() ? nlohmann::json::object() : std::move(params);
        r.lhs = lhs;
        r.rhs = rhs;
        r.ratio = rhs != 0.0 ? lhs / rhs : (lhs == 0.0 ? 1.0 : INFINITY);
        r.tolerance = tol;
        const double scale = std::max(std::fabs(lhs), std::fabs(rhs));
        r.pass = std::isfinite(lhs) && std::isfinite(rhs) && std::fabs(lhs - rhs) <= tol * scale;
        return r;
    }
};

namespace detail {
// JSON has no infinity or NaN; encode them as strings.
inline nlohmann::json number(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return v;
}
}  // namespace detail

inline nlohmann::json to_json(const Report& r)
{
    nlohmann::json j;
    j["op"] = r.op;
    j["params"] = r.params;
    j["lhs"] = detail::number(r.lhs);
    j["rhs"] = detail::number(r.rhs);
    j["ratio"] = detail::number(r.ratio);
    j["pass"] = r.pass;
    j["tolerance"] = r.tolerance;
    if (!r.extra.empty()) {
        j["extra"] = r.extra;
    }
    return j;
}

inline nlohmann::json to_json(const std::vector<Report>& rs)
{
    nlohmann::json a = nlohmann::json::array();
    for (const auto& r : rs) {
        a.push_back(to_json(r));
    }
    return a;
}

inline bool all_pass(const std::vector<Report>& rs)
{
    for (const auto& r : rs) {
        if (!r.pass) {
            return false;
        }
    }
    return true;
}

/// 64-bit FNV-1a, used for config hashes embedded in reports.
inline std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace oscillab
