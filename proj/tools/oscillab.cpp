// oscillab: command-line front end for the oscillation / smoothness toolkit.
//
// Exit codes: 0 all checks passed, 1 an assertion failed, 2 bad input or I/O.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oscillab/oscillab.hpp"

using namespace oscillab;
using nlohmann::json;

namespace {

// Bad option values or unreadable files.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double parse_real(const std::string& s)
{
    if (s == "inf" || s == "+inf" || s == "infinity") {
        return infinity;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
    if (used != s.size()) {
        throw UsageError("not a number: '" + s + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        out.push_back(cur);
    }
    if (!s.empty() && s.back() == sep) {
        out.emplace_back();
    }
    return out;
}

std::vector<double> parse_reals(const std::string& s)
{
    std::vector<double> v;
    for (const auto& t : split(s, ',')) {
        v.push_back(parse_real(t));
    }
    return v;
}

// "start:end:geometric[:nN]" or an explicit comma list.
std::vector<double> parse_eps_schedule(const std::string& s)
{
    if (s.find(':') == std::string::npos) {
        return parse_reals(s);
    }
    const auto f = split(s, ':');
    if (f.size() < 3 || f.size() > 4 || f[2] != "geometric") {
        throw UsageError("eps schedule must be start:end:geometric[:nN], got '" + s + "'");
    }
    const double a = parse_real(f[0]);
    const double b = parse_real(f[1]);
    if (!(a > b && b > 0.0)) {
        throw UsageError("eps schedule needs start > end > 0");
    }
    std::size_t n = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(std::log2(a / b))) + 1);
    if (f.size() == 4) {
        if (f[3].size() < 2 || f[3][0] != 'n') {
            throw UsageError("eps point count must look like n8, got '" + f[3] + "'");
        }
        const double c = parse_real(f[3].substr(1));
        if (!(c >= 2.0) || c != std::floor(c)) {
            throw UsageError("eps point count must be an integer >= 2");
        }
        n = static_cast<std::size_t>(c);
    }
    return geometric_schedule(a, b, n);
}

// "1..64", "dyadic", "all" or "1,2,4"; clipped to the grid.
std::vector<std::size_t> parse_sizes(const std::string& s, const GridDomain& d, bool& clipped)
{
    std::vector<std::size_t> out;
    clipped = false;
    if (s == "dyadic") {
        return CubeSweepConfig::dyadic_sizes(d);
    }
    if (s == "all") {
        return CubeSweepConfig::all_sizes(d);
    }
    auto as_count = [](const std::string& t) {
        const double v = parse_real(t);
        if (!(v >= 1.0) || v != std::floor(v)) {
            throw UsageError("cube size must be a positive integer, got '" + t + "'");
        }
        return static_cast<std::size_t>(v);
    };
    const auto dots = s.find("..");
    if (dots != std::string::npos) {
        const auto lo = as_count(s.substr(0, dots));
        const auto hi = as_count(s.substr(dots + 2));
        if (hi < lo) {
            throw UsageError("empty size range '" + s + "'");
        }
        for (auto m = lo; m <= hi; ++m) {
            out.push_back(m);
        }
    } else {
        for (const auto& t : split(s, ',')) {
            out.push_back(as_count(t));
        }
    }
    const auto n = d.min_cells();
    std::vector<std::size_t> kept;
    for (auto m : out) {
        if (m <= n) {
            kept.push_back(m);
        } else {
            clipped = true;
        }
    }
    if (kept.empty()) {
        throw UsageError("no cube size fits a grid with " + std::to_string(n) + " cells per axis");
    }
    return kept;
}

DifferenceSupport parse_support(const std::string& s)
{
    if (s == "whole_space") {
        return DifferenceSupport::whole_space;
    }
    if (s == "inside_box") {
        return DifferenceSupport::inside_box;
    }
    throw UsageError("support must be whole_space or inside_box");
}

Vec2 parse_direction(const std::string& s, int dim)
{
    const auto v = parse_reals(s);
    if (v.empty() || v.size() > 2) {
        throw UsageError("direction needs one or two components");
    }
    Vec2 n{v[0], v.size() == 2 ? v[1] : 0.0};
    const double len = std::hypot(n[0], n[1]);
    if (!(len > 0.0)) {
        throw UsageError("direction must be nonzero");
    }
    if (dim == 1 && n[1] != 0.0) {
        throw UsageError("1D grids only admit directions along the axis");
    }
    return {n[0] / len, n[1] / len};
}

std::string hex64(std::uint64_t h)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string grid_hash(const GridFunction& u)
{
    std::ostringstream s;
    write_grid_csv(s, u);
    return hex64(fnv1a(s.str()));
}

void write_text(const std::string& path, const std::string& text)
{
    if (path.empty() || path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw UsageError("cannot open '" + path + "' for writing");
    }
    f << text;
    if (!f) {
        throw UsageError("write to '" + path + "' failed");
    }
}

json read_json_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f) {
        throw UsageError("cannot open '" + path + "'");
    }
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

// Output envelope shared by every subcommand. Thread count is deliberately
// absent so the output is byte-identical across OSCILLAB_THREADS settings.
struct Run {
    std::string command;
    json config = json::object();
    std::uint64_t seed = 0;
    json tolerances = json::object();
    std::vector<Report> reports;

    [[nodiscard]] bool pass() const { return all_pass(reports); }

    [[nodiscard]] json envelope() const
    {
        json j;
        j["tool"] = "oscillab";
        j["version"] = toolkit_version;
        j["command"] = command;
        j["config"] = config;
        j["config_hash"] = hex64(fnv1a(command + config.dump()));
        j["seed"] = seed;
        j["tolerances"] = tolerances;
        j["reports"] = to_json(reports);
        j["pass"] = pass();
        return j;
    }

    int emit(const std::string& path) const
    {
        write_text(path, envelope().dump(2) + "\n");
        return pass() ? 0 : 1;
    }
};

// A computed quantity; optionally asserted against an upper bound.
Report value_report(std::string op, double value, json params, std::optional<double> bound, double tol)
{
    if (bound) {
        return Report::inequality(std::move(op), value, *bound, tol, std::move(params));
    }
    Report r;
    r.op = std::move(op);
    r.params = std::move(params);
    r.lhs = value;
    r.rhs = 0.0;
    r.ratio = 0.0;
    r.pass = !std::isnan(value);
    return r;
}

// ------------------------------------------------------------- subcommands

struct NormArgs {
    std::string input;
    std::string region;
    std::string kind = "lebesgue";
    std::string p = "2";
    std::string gamma;
    std::optional<double> expect_max;
    double tolerance = 1e-9;
    std::string out = "-";
};

int run_norm(const NormArgs& a)
{
    const auto u = read_grid_file(a.input);
    std::optional<CellMask> mask;
    if (!a.region.empty()) {
        mask = read_mask_file(a.region, u.domain());
    }
    const CellMask* m = mask ? &*mask : nullptr;
    const double p = parse_real(a.p);
    const double g = a.gamma.empty() ? p : parse_real(a.gamma);
    double v = 0.0;
    json prm{{"kind", a.kind}, {"p", detail::number(p)}};
    if (a.kind == "lebesgue") {
        v = std::isinf(p) ? sup_norm(u) : lebesgue_norm(u, p, m);
    } else if (a.kind == "lorentz") {
        v = lorentz_norm(distribution(u, p, m), g);
        prm["gamma"] = detail::number(g);
    } else if (a.kind == "weak") {
        v = weak_norm(u, p, m);
    } else if (a.kind == "sup") {
        v = sup_norm(u);
    } else {
        throw UsageError("norm kind must be lebesgue, lorentz, weak or sup");
    }
    Run run;
    run.command = "norm";
    run.config = {{"input_hash", grid_hash(u)}, {"region", a.region}, {"params", prm}};
    run.tolerances = {{"assert", a.tolerance}};
    run.reports.push_back(value_report("norm:" + a.kind, v, prm, a.expect_max, a.tolerance));
    return run.emit(a.out);
}

struct BmoArgs {
    std::string input;
    std::string form = "double_avg";
    std::string sizes = "dyadic";
    std::string mode = "exhaustive";
    std::size_t stride = 1;
    bool global = false;
    std::string vmo_radii;
    double jn_max = 0.0;
    std::size_t jn_steps = 60;
    std::optional<double> expect_max;
    double tolerance = 1e-9;
    std::string out = "-";
};

int run_bmo(const BmoArgs& a)
{
    auto u = read_grid_file(a.input);
    const std::string hash = grid_hash(u);
    if (a.global) {
        // zero padding so cubes can straddle the box edge
        u = pad(u, (u.domain().min_cells() + 3) / 4);
    }
    bool clipped = false;
    auto sizes = parse_sizes(a.sizes, u.domain(), clipped);
    CubeSweepConfig cfg;
    if (a.mode == "exhaustive") {
        cfg = CubeSweepConfig::exhaustive(sizes);
    } else if (a.mode == "strided") {
        cfg = CubeSweepConfig::strided(sizes, a.stride);
    } else {
        throw UsageError("mode must be exhaustive or strided");
    }
    const auto form = oscillation_form_from_string(a.form);
    const auto r = bmo_seminorm(u, cfg, form);
    json prm{{"form", a.form}, {"mode", a.mode}, {"stride", cfg.step()}, {"sizes", sizes}, {"global", a.global}};
    Run run;
    run.command = "bmo";
    run.config = {{"input_hash", hash}, {"params", prm}};
    run.tolerances = {{"assert", a.tolerance}};
    auto rep = value_report("bmo", r.seminorm, prm, a.expect_max, a.tolerance);
    rep.extra["argmax_cube"] = {{"lo", {r.argmax_cube.lo[0], r.argmax_cube.lo[1]}},
                                {"extent", {r.argmax_cube.extent[0], r.argmax_cube.extent[1]}}};
    rep.extra["cubes_tested"] = r.cubes_tested;
    rep.extra["sizes_clipped"] = clipped;
    if (!a.vmo_radii.empty()) {
        json pts = json::array();
        for (const auto& pt : vmo_modulus(u, cfg, parse_reals(a.vmo_radii), form)) {
            pts.push_back({{"radius", pt.radius}, {"value", pt.value}, {"unresolved", pt.unresolved}});
        }
        rep.extra["vmo_modulus"] = pts;
    }
    run.reports.push_back(rep);
    if (a.jn_max > 0.0) {
        const auto& d = u.domain();
        if (d.dim == 2 && d.cells[0] != d.cells[1]) {
            throw UsageError("the John-Nirenberg probe needs a square grid");
        }
        std::vector<double> sig;
        for (std::size_t i = 1; i <= a.jn_steps; ++i) {
            sig.push_back(a.jn_max * static_cast<double>(i) / static_cast<double>(a.jn_steps));
        }
        const auto jn = jn_decay_probe(u, CellBlock::cube(d, {0, 0}, d.min_cells()), sig);
        Report j;
        j.op = "jn_decay";
        j.params = {{"sigma_max", a.jn_max}, {"steps", a.jn_steps}};
        j.lhs = jn.slope;
        j.rhs = 0.0;
        j.ratio = 0.0;
        j.pass = jn.tail_points < 2 || jn.slope < 0.0;
        j.extra = {{"sigma", jn.sigma},          {"measure", jn.measure},       {"bmo", jn.bmo},
                   {"tail_threshold", jn.tail_threshold}, {"intercept", jn.intercept}, {"r_squared", jn.r_squared},
                   {"tail_points", jn.tail_points}};
        run.reports.push_back(j);
    }
    return run.emit(a.out);
}

struct SmoothArgs {
    std::string input;
    std::string s = "0.5";
    std::string p = "1";
    std::string q = "inf";
    double lattice_radius = 8.0;
    std::string form = "integral";
    std::string support = "whole_space";
    int k = 0;
    std::string cutoff;
    bool weak = false;
    bool perimeter = false;
    std::optional<double> expect_max;
    double tolerance = 1e-9;
    std::string out = "-";
};

int run_smoothness(const std::string& which, const SmoothArgs& a)
{
    const auto u = read_grid_file(a.input);
    const double s = parse_real(a.s);
    const double p = parse_real(a.p);
    const double q = parse_real(a.q);
    const auto support = parse_support(a.support);
    const auto lat = ShiftLattice::ball(u.domain().dim, a.lattice_radius);
    json prm{{"lattice_radius", a.lattice_radius}, {"support", a.support}};
    Run run;
    run.command = which;
    run.tolerances = {{"assert", a.tolerance}};
    if (which == "besov") {
        prm.update({{"s", s}, {"p", detail::number(p)}, {"q", detail::number(q)}, {"form", a.form}});
        if (a.form == "integral") {
            const auto r = besov_integral_norm(u, s, p, q, lat, support, a.k);
            prm["k"] = r.k;
            auto rep = value_report("besov:integral", r.value, prm, a.expect_max, a.tolerance);
            rep.extra = {{"t_min", r.t_min}, {"t_max", r.t_max}, {"tail_share", r.tail_share}};
            run.reports.push_back(rep);
        } else if (a.form == "sup" || a.form == "sup_weak") {
            // sup_h ||Delta_h u||_p / |h|^s
            const auto r = a.form == "sup" ? besov_sup_norm(u, s, p, lat, support) : besov_sup_norm_weak(u, s, p, lat, support);
            auto rep = value_report("besov:" + a.form, r.value, prm, a.expect_max, a.tolerance);
            rep.extra = {{"argmax", {r.argmax[0], r.argmax[1]}}};
            run.reports.push_back(rep);
        } else {
            throw UsageError("besov form must be integral, sup or sup_weak");
        }
    } else if (which == "sobolev") {
        prm.update({{"s", s}, {"p", p}});
        if (s == 1.0) {
            // W^{1,p}: difference quotients against the discrete gradient
            run.reports.push_back(sobolev_difference_check(u, p, lat));
        } else {
            const double cutoff = a.cutoff.empty() ? 2.0 * u.domain().diameter() : parse_real(a.cutoff);
            prm["cutoff"] = cutoff;
            prm["weak"] = a.weak;
            if (a.weak) {
                run.reports.push_back(value_report("sobolev:gagliardo_weak", gagliardo_weak_seminorm(u, s, p, cutoff), prm,
                                                   a.expect_max, a.tolerance));
            } else {
                const auto r = gagliardo_seminorm(u, s, p, cutoff);
                auto rep = value_report("sobolev:gagliardo", r.value, prm, a.expect_max, a.tolerance);
                rep.extra = {{"tail_bound", r.tail_bound}, {"offsets", r.offsets}};
                run.reports.push_back(rep);
            }
        }
    } else {
        prm["weak"] = a.weak;
        const auto r = a.weak ? bv_variation_weak(u, lat, support) : bv_variation(u, lat, support);
        auto rep = value_report(a.weak ? "bv:weak" : "bv", r.value, prm, a.expect_max, a.tolerance);
        rep.extra = {{"argmax", {r.argmax[0], r.argmax[1]}}};
        if (a.perimeter) {
            rep.extra["perimeter_estimate"] = bv_perimeter_estimate(u, lat, support);
        }
        run.reports.push_back(rep);
    }
    run.config = {{"input_hash", grid_hash(u)}, {"params", prm}};
    return run.emit(a.out);
}

struct InterpArgs {
    std::string suite = "exact";
    std::string family;
    std::string params;
    std::string theorems;
    int dim = 1;
    std::size_t cells = 256;
    std::uint64_t seed = 0;
    std::size_t count = 1;
    std::string out = "-";
};

std::vector<Generator> parse_family(const std::string& s, std::vector<Generator> fallback)
{
    if (s.empty()) {
        return fallback;
    }
    std::vector<Generator> g;
    for (const auto& t : split(s, ',')) {
        g.push_back(generator_from_string(t));
    }
    return g;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback)
{
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

double real_or(const json& j, const char* key, double fallback)
{
    if (!j.contains(key)) {
        return fallback;
    }
    const auto& v = j.at(key);
    return v.is_string() ? parse_real(v.get<std::string>()) : v.get<double>();
}

int run_interp(const InterpArgs& a)
{
    const json prm = a.params.empty() ? json::object() : read_json_file(a.params);
    Run run;
    run.command = "interp-check";
    run.seed = a.seed;
    const int dim = get_or<int>(prm, "dim", a.dim);
    const auto cells = get_or<std::size_t>(prm, "cells", a.cells);
    auto make = [&](Generator g, std::uint64_t seed) {
        FixtureSpec spec;
        spec.generator = g;
        spec.dim = dim;
        spec.cells = cells;
        spec.seed = seed;
        return generate_fixture(spec).u;
    };
    json fam = json::array();
    auto tag = [](Report r, Generator g, std::uint64_t seed) {
        r.params["fixture"] = to_string(g);
        r.params["seed"] = seed;
        return r;
    };

    if (a.suite == "exact") {
        const auto family = parse_family(a.family, {Generator::random_piecewise, Generator::step, Generator::multi_step,
                                                    Generator::log_singular, Generator::hoelder_bump,
                                                    Generator::gaussian_bump, Generator::constant});
        ExactSuiteParams ep;
        ep.q_values = get_or(prm, "q_values", ep.q_values);
        ep.gammas = get_or(prm, "gammas", ep.gammas);
        ep.bmo_powers = get_or(prm, "bmo_powers", ep.bmo_powers);
        ep.young_triples = get_or(prm, "young_triples", ep.young_triples);
        ep.tolerance = real_or(prm, "tolerance", ep.tolerance);
        run.tolerances = {{"relative", ep.tolerance}, {"absolute_floor", "1e-12 * max|u|"}};
        for (auto g : family) {
            fam.push_back(to_string(g));
            const std::size_t n = g == Generator::random_piecewise ? a.count : 1;
            for (std::size_t i = 0; i < n; ++i) {
                ep.seed = a.seed + i;
                for (const auto& r : exact_inequality_suite(make(g, ep.seed), ep)) {
                    run.reports.push_back(tag(r, g, ep.seed));
                }
            }
        }
    } else if (a.suite == "ratio") {
        ScanOptions opt;
        opt.fixtures = parse_family(a.family, opt.fixtures);
        opt.dim = dim;
        opt.cells = cells;
        opt.settings.drift_tol = real_or(prm, "drift_tol", opt.settings.drift_tol);
        if (prm.contains("points")) {
            for (const auto& x : prm.at("points")) {
                opt.params.push_back({real_or(x, "p", 1.0), real_or(x, "q", 2.0), real_or(x, "gamma", 2.0),
                                      real_or(x, "s", 0.5), real_or(x, "w", 1.0)});
            }
        }
        for (auto g : opt.fixtures) {
            fam.push_back(to_string(g));
        }
        std::vector<Theorem> ths(all_theorems.begin(), all_theorems.end());
        const std::string names = !a.theorems.empty() ? a.theorems : get_or<std::string>(prm, "theorems", "");
        if (!names.empty()) {
            ths.clear();
            for (const auto& t : split(names, ',')) {
                ths.push_back(theorem_from_string(t));
            }
        }
        run.tolerances = {{"drift", opt.settings.drift_tol},
                          {"amplitude", opt.settings.amplitude_tol},
                          {"dilation", opt.settings.dilation_tol}};
        for (auto t : ths) {
            run.reports.push_back(to_report(bmo_ratio_scan(t, opt), opt));
        }
    } else if (a.suite == "sandwich") {
        const auto family = parse_family(a.family, {Generator::step, Generator::log_singular, Generator::hoelder_bump});
        const double q = real_or(prm, "q", 2.0);
        const double gamma = real_or(prm, "gamma", 1.0);
        const bool local = get_or(prm, "local", false);
        const auto factors = get_or<std::vector<double>>(prm, "k_factors", {1.0, 1.5, 2.0, 3.0});
        run.tolerances = {{"relative", 1e-9}};
        for (auto g : family) {
            fam.push_back(to_string(g));
            const auto u = make(g, a.seed);
            const double b = local ? local_bmo(u) : global_bmo(u);
            for (double f : factors) {
                if (!(f >= 1.0)) {
                    throw UsageError("k_factors must be >= 1 (k >= BMO norm)");
                }
                auto r = char_sandwich_check(u, f * b, q, gamma, local, b);
                r.params["k_factor"] = f;
                run.reports.push_back(tag(r, g, a.seed));
            }
        }
    } else if (a.suite == "vmo") {
        const auto family = parse_family(a.family, {Generator::gaussian_bump, Generator::hoelder_bump});
        const double p = real_or(prm, "p", 1.0);
        const double q = real_or(prm, "q", 2.0);
        const double s = real_or(prm, "s", p < q ? 0.5 : 1.0 / p);
        const auto shifts = geometric_shifts(get_or<std::size_t>(prm, "max_shift", cells / 8),
                                             get_or<std::size_t>(prm, "shifts", 8));
        const double bound = real_or(prm, "ratio_bound", 0.1);
        const double band = real_or(prm, "band", 0.1);
        run.tolerances = {{"ratio_bound", bound}, {"band", band}};
        for (auto g : family) {
            fam.push_back(to_string(g));
            const auto u = make(g, a.seed);
            if (p < q) {
                run.reports.push_back(tag(vmo_vanishing_check(u, p, q, s, shifts, bound), g, a.seed));
                continue;
            }
            if (p != q) {
                throw UsageError("vmo suite needs p <= q");
            }
            // persistence: with sp = 1 a jump keeps E(h) at sum |jump|^p
            double expected = real_or(prm, "expected", 0.0);
            if (expected == 0.0) {
                if (g != Generator::step) {
                    throw UsageError("vmo persistence needs \"expected\" in the params file for " + std::string(to_string(g)));
                }
                expected = 1.0;  // unit step, interior jump only
            }
            run.reports.push_back(tag(vmo_persistence_check(u, p, s, shifts, expected, band), g, a.seed));
        }
    } else {
        throw UsageError("suite must be exact, ratio, sandwich or vmo");
    }
    run.config = {{"suite", a.suite}, {"family", fam}, {"dim", dim}, {"cells", cells}, {"count", a.count}, {"params", prm}};
    return run.emit(a.out);
}

struct JumpArgs {
    std::string input;
    std::string region;
    std::string box;
    std::string mode = "directional";
    std::string n = "1,0";
    std::string kernel = "box";
    double q = 2.0;
    std::string eps = "0.2:0.01:geometric";
    std::size_t fan = 8;
    std::string curve_out;
    std::string shape;
    double tolerance = 0.05;
    std::string out = "-";
};

JumpShape parse_shape(const std::string& text)
{
    json j;
    if (!text.empty() && text.front() == '{') {
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw UsageError(std::string("shape descriptor: ") + e.what());
        }
    } else {
        j = read_json_file(text);
    }
    const auto kind = j.value("kind", std::string());
    const double a = j.value("amplitude", 1.0);
    auto vec2 = [&](const char* key) {
        const auto v = j.at(key).get<std::vector<double>>();
        if (v.size() != 2) {
            throw UsageError(std::string("shape descriptor: '") + key + "' needs two numbers");
        }
        return Vec2{v[0], v[1]};
    };
    if (kind == "step1d") {
        return JumpShape::step1d(a, j.value("x0", 0.0));
    }
    if (kind == "staircase1d") {
        return JumpShape::staircase1d(j.at("positions").get<std::vector<double>>(), j.at("jumps").get<std::vector<double>>());
    }
    if (kind == "disk2d") {
        return JumpShape::disk2d(a, vec2("center"), j.at("radius").get<double>());
    }
    if (kind == "square2d") {
        return JumpShape::square2d(a, vec2("center"), j.at("side").get<double>());
    }
    throw UsageError("shape kind must be step1d, staircase1d, disk2d or square2d");
}

int run_jump(const JumpArgs& a)
{
    const auto u = read_grid_file(a.input);
    const auto& d = u.domain();
    RegionBox box;
    bool have_box = false;
    if (!a.box.empty()) {
        const auto v = parse_reals(a.box);
        if (d.dim == 1 && v.size() == 2) {
            box = {{v[0], 0.0}, {v[1], 0.0}};
        } else if (d.dim == 2 && v.size() == 4) {
            box = {{v[0], v[1]}, {v[2], v[3]}};
        } else {
            throw UsageError("--box needs lo,hi in 1D or x0,y0,x1,y1 in 2D");
        }
        have_box = true;
    } else {
        box.lo = d.origin;
        box.hi = {d.origin[0] + static_cast<double>(d.cells[0]) * d.spacing,
                  d.dim == 2 ? d.origin[1] + static_cast<double>(d.cells[1]) * d.spacing : 0.0};
    }
    const CellMask mask = !a.region.empty() ? read_mask_file(a.region, d) : box.mask(d);
    const auto eps = parse_eps_schedule(a.eps);
    json prm{{"mode", a.mode}, {"q", a.q}, {"eps", eps}};
    Run run;
    run.command = "jump-detect";
    run.tolerances = {{"relative", a.tolerance}};
    EnergyCurve curve;
    double limit = 0.0;
    Vec2 n{1.0, 0.0};
    if (a.mode == "directional") {
        n = parse_direction(a.n, d.dim);
        prm["n"] = {n[0], n[1]};
        curve = directional_sweep(u, mask, n, a.q, eps);
        limit = curve.limit;
    } else if (a.mode == "kernel") {
        prm["kernel"] = a.kernel;
        curve = kernel_sweep(u, mask, KernelFamily(kernel_kind_from_string(a.kernel), d.dim), a.q, eps);
        limit = curve.limit;
    } else if (a.mode == "fan") {
        prm["directions"] = a.fan;
        limit = directional_fan_limit(u, mask, a.q, eps, a.fan);
    } else {
        throw UsageError("mode must be directional, kernel or fan");
    }
    Report r;
    if (!a.shape.empty()) {
        if (!a.region.empty() && !have_box) {
            throw UsageError("ground truth with a mask file needs the matching --box");
        }
        const auto shape = parse_shape(a.shape);
        if (!boundary_condition_check(box, shape)) {
            throw UsageError("the jump set of the shape meets the region boundary");
        }
        const auto truth = ground_truth(shape, box, a.q, n);
        const double expected = a.mode == "directional" ? truth.directional : truth.kernel_limit();
        r = Report::equality("jump_energy:" + a.mode, limit, expected, a.tolerance, prm);
        r.extra["shape"] = a.shape;
    } else {
        r = value_report("jump_energy:" + a.mode, limit, prm, std::nullopt, a.tolerance);
    }
    if (a.mode != "fan") {
        r.extra["energy"] = curve.energy;
        r.extra["uncertainty"] = curve.uncertainty;
        r.extra["under_resolved"] = curve.under_resolved;
    }
    if (!a.curve_out.empty()) {
        std::ostringstream c;
        c << "eps,energy\n";
        for (std::size_t i = 0; i < curve.eps.size(); ++i) {
            c << detail::format_double(curve.eps[i]) << "," << detail::format_double(curve.energy[i]) << "\n";
        }
        write_text(a.curve_out, c.str());
    }
    run.reports.push_back(r);
    run.config = {{"input_hash", grid_hash(u)}, {"region", a.region}, {"box", a.box}, {"params", prm}, {"shape", a.shape}};
    return run.emit(a.out);
}

struct KernelArgs {
    std::string kernel = "box";
    int dim = 2;
    std::string eps = "0.2:0.01:geometric";
    double delta = 0.05;
    double tolerance = 1e-6;
    std::string out = "-";
};

int run_kernel(const KernelArgs& a)
{
    const KernelFamily k(kernel_kind_from_string(a.kernel), a.dim);
    const auto eps = parse_eps_schedule(a.eps);
    Run run;
    run.command = "kernel-check";
    run.config = {{"kernel", a.kernel}, {"dim", a.dim}, {"eps", eps}, {"delta", a.delta}};
    run.tolerances = {{"mass", a.tolerance}};
    std::vector<double> tails;
    for (double e : eps) {
        const double m = k.mass(e);
        Report r;
        r.op = "kernel_mass";
        r.params = {{"eps", e}};
        r.lhs = m;
        r.rhs = 1.0;
        r.ratio = m;
        r.tolerance = a.tolerance;
        r.pass = std::fabs(m - 1.0) <= a.tolerance;
        run.reports.push_back(r);
        tails.push_back(k.tail(a.delta, e));
    }
    double worst = 0.0;
    for (std::size_t i = 1; i < tails.size(); ++i) {
        worst = std::max(worst, tails[i] - tails[i - 1]);
    }
    auto t = Report::inequality("kernel_tail_monotone", worst, 0.0, 0.0, {{"delta", a.delta}}, 1e-15);
    t.extra["tail"] = tails;
    run.reports.push_back(t);
    return run.emit(a.out);
}

struct FixtureArgs {
    std::string generator = "step";
    int dim = 1;
    std::size_t cells = 256;
    double amplitude = 1.0;
    double half_width = 1.0;
    std::uint64_t seed = 0;
    std::size_t pieces = 8;
    std::string format = "csv";
    std::string out = "-";
};

int run_fixture(const FixtureArgs& a)
{
    FixtureSpec s;
    s.generator = generator_from_string(a.generator);
    s.dim = a.dim;
    s.cells = a.cells;
    s.amplitude = a.amplitude;
    s.half_width = a.half_width;
    s.seed = a.seed;
    s.pieces = a.pieces;
    const auto f = generate_fixture(s);
    if (!f.note.empty()) {
        std::cerr << "oscillab: " << f.note << "\n";
    }
    if (a.format == "csv") {
        std::ostringstream o;
        write_grid_csv(o, f.u);
        write_text(a.out, o.str());
    } else if (a.format == "json") {
        write_text(a.out, grid_to_json(f.u).dump() + "\n");
    } else {
        throw UsageError("format must be csv or json");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    configure_threads_from_env();
    CLI::App app{"oscillab: BMO, Besov, Sobolev and BV seminorms on grids, interpolation checks, jump detection"};
    app.set_version_flag("--version", std::string(toolkit_version));
    app.require_subcommand(1);

    NormArgs na;
    auto* norm = app.add_subcommand("norm", "Lebesgue, Lorentz or weak quasi-norm of a grid function");
    norm->add_option("--input", na.input, "grid file (CSV or JSON, - for stdin)")->required();
    norm->add_option("--region", na.region, "mask grid; nonzero cells are inside");
    norm->add_option("--kind", na.kind, "lebesgue | lorentz | weak | sup");
    norm->add_option("--p", na.p, "exponent (inf allowed for lebesgue)");
    norm->add_option("--gamma", na.gamma, "second Lorentz index (default p; inf allowed)");
    norm->add_option("--expect-max", na.expect_max, "assert value <= bound");
    norm->add_option("--tolerance", na.tolerance, "relative tolerance of the assertion");
    norm->add_option("--json", na.out, "report path, - for stdout");

    BmoArgs ba;
    auto* bmo = app.add_subcommand("bmo", "BMO seminorm by cube sweep");
    bmo->add_option("--input", ba.input)->required();
    bmo->add_option("--form", ba.form, "double_avg | mean_osc");
    bmo->add_option("--sizes", ba.sizes, "a..b, comma list, dyadic or all (in cells)");
    bmo->add_option("--mode", ba.mode, "exhaustive | strided");
    bmo->add_option("--stride", ba.stride, "corner stride for strided mode");
    bmo->add_flag("--global", ba.global, "zero-extend by a quarter of the grid before sweeping");
    bmo->add_option("--vmo-radii", ba.vmo_radii, "comma list of radii for the VMO modulus");
    bmo->add_option("--jn-max", ba.jn_max, "largest sigma of the John-Nirenberg probe (0 = off)");
    bmo->add_option("--jn-steps", ba.jn_steps, "sigma count of the John-Nirenberg probe");
    bmo->add_option("--expect-max", ba.expect_max, "assert seminorm <= bound");
    bmo->add_option("--tolerance", ba.tolerance);
    bmo->add_option("--json", ba.out, "report path, - for stdout");

    SmoothArgs sa;
    std::string smooth_cmd;
    const std::pair<const char*, const char*> smooth_cmds[] = {
        {"besov", "Besov seminorm from the lattice modulus of continuity"},
        {"sobolev", "fractional Sobolev (Gagliardo) seminorm, or W^{1,p} difference check at s = 1"},
        {"bv", "BV variation sup_h ||u(.+h) - u||_1 / |h| over a shift lattice"}};
    for (const auto& [name, help] : smooth_cmds) {
        auto* c = app.add_subcommand(name, help);
        c->add_option("--input", sa.input)->required();
        c->add_option("--s", sa.s, "smoothness");
        c->add_option("--p", sa.p, "integrability");
        c->add_option("--q", sa.q, "fine index (inf allowed; besov only)");
        c->add_option("--lattice-radius", sa.lattice_radius, "shift lattice radius in cells");
        c->add_option("--form", sa.form, "integral | sup | sup_weak (besov)");
        c->add_option("--support", sa.support, "whole_space | inside_box");
        c->add_option("--k", sa.k, "difference order (default floor(s)+1)");
        c->add_option("--cutoff", sa.cutoff, "Gagliardo pair cutoff (default twice the diameter)");
        c->add_flag("--weak", sa.weak, "weak-type variant");
        c->add_flag("--perimeter", sa.perimeter, "add a perimeter estimate (bv)");
        c->add_option("--expect-max", sa.expect_max, "assert value <= bound");
        c->add_option("--tolerance", sa.tolerance);
        c->add_option("--json", sa.out, "report path, - for stdout");
        c->callback([&smooth_cmd, name] { smooth_cmd = name; });
    }

    InterpArgs ia;
    auto* interp = app.add_subcommand("interp-check", "interpolation inequality suites");
    interp->add_option("--suite", ia.suite, "exact | ratio | sandwich | vmo");
    interp->add_option("--family", ia.family, "comma list of fixture generators");
    interp->add_option("--params", ia.params, "JSON file with suite parameters");
    interp->add_option("--theorem", ia.theorems, "comma list of theorems (ratio suite)");
    interp->add_option("--dim", ia.dim);
    interp->add_option("--cells", ia.cells);
    interp->add_option("--seed", ia.seed);
    interp->add_option("--count", ia.count, "random seeds per random fixture (exact suite)");
    interp->add_option("--out,--json", ia.out, "report path, - for stdout");

    JumpArgs ja;
    auto* jump = app.add_subcommand("jump-detect", "nonlocal jump energies as eps -> 0");
    jump->add_option("--input", ja.input)->required();
    jump->add_option("--region", ja.region, "mask grid (default: --box or the whole grid)");
    jump->add_option("--box", ja.box, "region box lo,hi (1D) or x0,y0,x1,y1 (2D)");
    jump->add_option("--mode", ja.mode, "directional | kernel | fan");
    jump->add_option("--n", ja.n, "direction, e.g. 1,0");
    jump->add_option("--kernel", ja.kernel, "box | gaussian_radial | exponential_radial");
    jump->add_option("--q", ja.q);
    jump->add_option("--eps", ja.eps, "start:end:geometric[:nN] or comma list");
    jump->add_option("--fan", ja.fan, "direction count for fan mode");
    jump->add_option("--out", ja.curve_out, "energy curve CSV (eps,energy)");
    jump->add_option("--shape", ja.shape, "ground-truth shape as JSON or a JSON file");
    jump->add_option("--tolerance", ja.tolerance, "relative tolerance against the ground truth");
    jump->add_option("--json", ja.out, "report path, - for stdout");

    KernelArgs ka;
    auto* kern = app.add_subcommand("kernel-check", "unit mass and tail monotonicity of a kernel family");
    kern->add_option("--kernel", ka.kernel);
    kern->add_option("--dim", ka.dim);
    kern->add_option("--eps", ka.eps);
    kern->add_option("--delta", ka.delta);
    kern->add_option("--tolerance", ka.tolerance);
    kern->add_option("--json", ka.out);

    FixtureArgs fa;
    auto* fix = app.add_subcommand("fixture", "write a synthetic grid function");
    fix->add_option("--generator", fa.generator);
    fix->add_option("--dim", fa.dim);
    fix->add_option("--cells", fa.cells);
    fix->add_option("--amplitude", fa.amplitude);
    fix->add_option("--half-width", fa.half_width);
    fix->add_option("--seed", fa.seed);
    fix->add_option("--pieces", fa.pieces);
    fix->add_option("--format", fa.format, "csv | json");
    fix->add_option("--out", fa.out, "path, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*norm) {
            return run_norm(na);
        }
        if (*bmo) {
            return run_bmo(ba);
        }
        if (!smooth_cmd.empty()) {
            return run_smoothness(smooth_cmd, sa);
        }
        if (*interp) {
            return run_interp(ia);
        }
        if (*jump) {
            return run_jump(ja);
        }
        if (*kern) {
            return run_kernel(ka);
        }
        if (*fix) {
            return run_fixture(fa);
        }
    } catch (const GridFormatError& e) {
        std::cerr << "oscillab: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "oscillab: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
