#pragma once

// Numerical harness for the BMO interpolation inequalities.
//
// Inequalities with explicit constants are asserted. Inequalities whose
// constant is only known to exist are turned into ratio scans: the ratio
// LHS / RHS must be finite, invariant under u -> c u and under dilation of
// the box, and stable under grid refinement.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fixtures.hpp"
#include "grid.hpp"
#include "measure.hpp"
#include "oscillation.hpp"
#include "report.hpp"
#include "smoothness.hpp"

namespace oscillab {

// ------------------------------------------------------------ exact suite

struct ExactSuiteParams {
    std::vector<double> q_values{0.5, 1.0, 2.0, 3.0};
    std::vector<double> gammas{0.5, 1.0, 2.0, 4.0};
    struct Triple {
        double r, p, q;
    };
    std::vector<Triple> power_triples{{2.0, 1.0, 1.0}, {0.5, 2.0, infinity}, {3.0, 0.7, 1.5}};
    std::vector<double> bmo_powers{0.25, 0.5, 1.0};
    std::vector<double> level_fractions{0.25, 0.5, 0.9};  // k as a fraction of max|u|
    std::size_t young_triples = 100;
    std::uint64_t seed = 0;
    double tolerance = 1e-9;
    std::optional<CubeSweepConfig> sweep;  // default: dyadic, exhaustive in 1D, stride 4 in 2D
};

namespace detail {
inline CubeSweepConfig default_sweep(const GridDomain& d)
{
    auto sizes = CubeSweepConfig::dyadic_sizes(d);
    return d.dim == 1 ? CubeSweepConfig::exhaustive(sizes) : CubeSweepConfig::strided(sizes, 4);
}

// Keeps the first failing report, otherwise the one with the largest ratio;
// `count` records how many cases were merged.
inline Report merge_worst(std::string op, const std::vector<Report>& rs, double tol, nlohmann::json params = {})
{
    Report out;
    out.op = std::move(op);
    out.tolerance = tol;
    out.params = params.is_null() ? nlohmann::json::object() : std::move(params);
    if (rs.empty()) {
        return out;
    }
    std::size_t pick = 0;
    bool failed = false;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (!rs[i].pass) {
            pick = i;
            failed = true;
            break;
        }
        if (rs[i].ratio > rs[pick].ratio) {
            pick = i;
        }
    }
    out.lhs = rs[pick].lhs;
    out.rhs = rs[pick].rhs;
    out.ratio = rs[pick].ratio;
    out.pass = !failed;
    out.extra["count"] = rs.size();
    if (!rs[pick].params.empty()) {
        out.extra["worst_case"] = rs[pick].params;
    }
    return out;
}
}  // namespace detail

/// Every inequality with an explicit constant, on one function. The returned
/// list is in a fixed order; see ExactSuiteParams for the parameter sets.
inline std::vector<Report> exact_inequality_suite(const GridFunction& u, const ExactSuiteParams& prm = {})
{
    const double tol = prm.tolerance;
    const double scale = std::max(u.max_abs(), 1e-300);
    const double floor_abs = 1e-12 * scale;  // zero-vs-roundoff cases
    std::vector<Report> out;

    // (a) Chebyshev: [u]_{L^q_w} <= ||u||_{L^q}; and L^{q,q} = L^q
    {
        std::vector<Report> cheb, lqq;
        for (double q : prm.q_values) {
            const double lq = lebesgue_norm(u, q);
            cheb.push_back(Report::inequality("chebyshev", weak_norm(u, q), lq, tol, {{"q", q}}));
            auto r = Report::equality("lorentz_qq", lorentz_norm(distribution(u, q), q), lq, 1e-10, {{"q", q}});
            if (lq == 0.0) {
                r.pass = true;
            }
            lqq.push_back(r);
        }
        out.push_back(detail::merge_worst("chebyshev", cheb, tol));
        out.push_back(detail::merge_worst("lorentz_qq_equals_lq", lqq, 1e-10));
    }
    // (b) [u]_{L^q_w} <= (gamma/q)^{1/gamma} ||u||_{L^{q,gamma}}
    {
        std::vector<Report> rs;
        for (double q : prm.q_values) {
            const auto curve = distribution(u, q);
            const double w = lorentz_norm(curve, infinity);
            for (double g : prm.gammas) {
                const double rhs = std::pow(g / q, 1.0 / g) * lorentz_norm(curve, g);
                rs.push_back(Report::inequality("weak_vs_lorentz", w, rhs, tol, {{"q", q}, {"gamma", g}}, floor_abs));
            }
        }
        out.push_back(detail::merge_worst("weak_vs_lorentz", rs, tol));
    }
    // (c) || |u|^r ||_{L^{p,q}} = ||u||^r_{L^{rp,rq}}
    {
        std::vector<Report> rs;
        for (const auto& t : prm.power_triples) {
            auto r = power_identity_check(u, t.r, t.p, t.q, tol);
            if (r.lhs == 0.0 && r.rhs == 0.0) {
                r.pass = true;
            }
            rs.push_back(r);
        }
        out.push_back(detail::merge_worst("power_identity", rs, tol));
    }
    const CubeSweepConfig sweep = prm.sweep ? *prm.sweep : detail::default_sweep(u.domain());
    // (d) mean_osc <= double_avg <= 2 mean_osc on every cube of the sweep
    {
        const auto cubes = sweep_cubes(u.domain(), sweep);
        const auto pairs = parallel_map<std::array<double, 2>>(cubes.size(), [&](std::size_t i) {
            return std::array<double, 2>{mean_oscillation(u, cubes[i]), double_average_oscillation(u, cubes[i])};
        });
        std::vector<Report> lo, hi;
        for (std::size_t i = 0; i < cubes.size(); ++i) {
            const auto [m, da] = pairs[i];
            nlohmann::json where = {{"lo", {cubes[i].lo[0], cubes[i].lo[1]}}, {"edge", cubes[i].extent[0]}};
            lo.push_back(Report::inequality("osc_lower", m, da, tol, where, floor_abs));
            hi.push_back(Report::inequality("osc_upper", da, 2.0 * m, tol, where, floor_abs));
        }
        out.push_back(detail::merge_worst("osc_sandwich_lower", lo, tol));
        out.push_back(detail::merge_worst("osc_sandwich_upper", hi, tol));
    }
    // (e) || |u|^g ||_BMO <= ||u||_BMO^g on the same sweep
    {
        const double b = bmo_seminorm(u, sweep).seminorm;
        std::vector<Report> rs;
        for (double g : prm.bmo_powers) {
            const double lhs = bmo_seminorm(u.abs_pow(g), sweep).seminorm;
            rs.push_back(Report::inequality("bmo_power", lhs, std::pow(b, g), tol, {{"gamma", g}},
                                            1e-12 * std::pow(scale, g)));
        }
        out.push_back(detail::merge_worst("bmo_power", rs, tol));
    }
    // (f) Young with epsilon on seeded scalar triples
    {
        std::mt19937_64 rng(prm.seed ^ 0x9e3779b97f4a7c15ULL);
        std::vector<Report> rs;
        for (std::size_t i = 0; i < prm.young_triples; ++i) {
            const double a = std::exp(4.0 * detail::unit_double(rng) - 2.0);
            const double b = std::exp(4.0 * detail::unit_double(rng) - 2.0);
            const double e = std::exp(4.0 * detail::unit_double(rng) - 2.0);
            const double p = 1.0 + 4.0 * detail::unit_double(rng) + 1e-3;
            const double q = p / (p - 1.0);
            // second term in log form: q near 1/(p-1) overflows b^q on its own
            const double rhs = e * std::pow(a, p) / p + std::exp(q * (std::log(b) - std::log(e) / p) - std::log(q));
            rs.push_back(Report::inequality("young_eps", a * b, rhs, tol, {{"a", a}, {"b", b}, {"eps", e}, {"p", p}}));
        }
        out.push_back(detail::merge_worst("young_eps", rs, tol));
    }
    // (g) lower chain of the truncation bound, (h) the min-truncation chain
    {
        std::vector<Report> g1, g2, h1, h2;
        const double top = u.max_abs();
        for (double frac : prm.level_fractions) {
            const double k = frac * top;
            if (!(k > 0.0)) {
                continue;
            }
            const GridFunction cut = u.map([k](double v) { return std::fabs(v) > k ? v : 0.0; });
            const GridFunction low = u.map([k](double v) { return std::min(std::fabs(v), k); });
            std::size_t above = 0;
            for (double v : u.values()) {
                above += std::fabs(v) > k ? 1 : 0;
            }
            const double level_measure = static_cast<double>(above) * u.domain().cell_volume();
            for (double q : {1.0, 2.0}) {
                for (double g : {0.5, 1.0, 2.0}) {
                    const double c = std::pow(q / g, 1.0 / g);
                    const double t1 = c * k * std::pow(level_measure, 1.0 / q);
                    const double t2 = c * weak_norm(cut, q);
                    const double t3 = lorentz_norm(distribution(cut, q), g);
                    nlohmann::json prm_j = {{"k", k}, {"q", q}, {"gamma", g}};
                    g1.push_back(Report::inequality("level_chain_1", t1, t2, tol, prm_j, floor_abs));
                    g2.push_back(Report::inequality("level_chain_2", t2, t3, tol, prm_j, floor_abs));
                }
            }
            for (const auto& [p, q] : {std::pair{0.5, 1.0}, std::pair{1.0, 2.0}, std::pair{1.0, 3.0}, std::pair{2.0, 4.0}}) {
                const auto dp = distribution(u, p);
                const double trunc = std::pow(truncated_sup(dp, std::pow(k, p)), 1.0 / q) * std::pow(k, 1.0 - p / q);
                const double weak = std::pow(lorentz_norm(dp, infinity), p / q) * std::pow(k, 1.0 - p / q);
                for (double g : {0.5, 1.0, 2.0, infinity}) {
                    const double c = std::isinf(g) ? 1.0 : std::pow(g / q * (1.0 - p / q), -1.0 / g);
                    const double lhs = lorentz_norm(distribution(low, q), g);
                    nlohmann::json prm_j = {{"k", k}, {"p", p}, {"q", q}, {"gamma", detail::number(g)}};
                    h1.push_back(Report::inequality("min_chain_1", lhs, c * trunc, tol, prm_j, floor_abs));
                    h2.push_back(Report::inequality("min_chain_2", c * trunc, c * weak, tol, prm_j, floor_abs));
                }
            }
        }
        out.push_back(detail::merge_worst("level_chain_lower", g1, tol));
        out.push_back(detail::merge_worst("level_chain_upper", g2, tol));
        out.push_back(detail::merge_worst("min_chain_truncated", h1, tol));
        out.push_back(detail::merge_worst("min_chain_weak", h2, tol));
    }
    return out;
}

// ------------------------------------------------------------ ratio scans

enum class Theorem {
    local_lorentz,       // ||u - u_C||_{L^{q,g}(C)} <= C [u - u_C]^{p/q}_{L^p_w(C)} ||u||^{1-p/q}_{BMO(C)}
    global_lorentz,      // ||u||_{L^{q,g}} <= C [u]^{p/q}_{L^p_w} ||u||^{1-p/q}_BMO
    lq_corollary,        // ||u||_q <= C ||u||_p^{p/q} ||u||_BMO^{1-p/q}
    fractional_sobolev,  // ||u||_{W^{ps/q,q}} <= C [u]^{p/q}_{W^{s,p}_w} ||u||^{1-p/q}_BMO
    weak_besov,          // ||u||_{B^{sp/q}_{q,inf}} <= C [u]^{p/q}_{(B^s_{p,inf})_w} ||u||^{1-p/q}_BMO
    bv,                  // ||u||_{B^{1/q}_{q,inf}} <= C [u]^{1/q}_{BV_w} ||u||^{1-1/q}_BMO
    general_besov,       // ||u||_{B^{sw/p}_{p,q}} <= C ||u||_BMO^{1-w/p} ||u||^{w/p}_{B^s_{w,qw/p}}, s < 1
    sobolev_corollary    // ||u||_{W^{s,p}} <= C ||grad u||^s_{L^{sp}} ||u||^{1-s}_BMO, s in (1/p, 1)
};

inline constexpr std::array<Theorem, 8> all_theorems{Theorem::local_lorentz,      Theorem::global_lorentz,
                                                     Theorem::lq_corollary,       Theorem::fractional_sobolev,
                                                     Theorem::weak_besov,         Theorem::bv,
                                                     Theorem::general_besov,      Theorem::sobolev_corollary};

inline std::string_view to_string(Theorem t)
{
    switch (t) {
    case Theorem::local_lorentz: return "local_lorentz";
    case Theorem::global_lorentz: return "global_lorentz";
    case Theorem::lq_corollary: return "lq_corollary";
    case Theorem::fractional_sobolev: return "fractional_sobolev";
    case Theorem::weak_besov: return "weak_besov";
    case Theorem::bv: return "bv";
    case Theorem::general_besov: return "general_besov";
    case Theorem::sobolev_corollary: return "sobolev_corollary";
    }
    return "?";
}

inline Theorem theorem_from_string(std::string_view s)
{
    for (auto t : all_theorems) {
        if (to_string(t) == s) {
            return t;
        }
    }
    throw std::invalid_argument("unknown theorem: " + std::string(s));
}

struct ParamPoint {
    double p = 1.0;
    double q = 2.0;
    double gamma = 2.0;
    double s = 0.5;
    double w = 1.0;
};

inline nlohmann::json to_json(const ParamPoint& x, Theorem t)
{
    switch (t) {
    case Theorem::local_lorentz:
    case Theorem::global_lorentz: return {{"p", x.p}, {"q", x.q}, {"gamma", detail::number(x.gamma)}};
    case Theorem::lq_corollary: return {{"p", x.p}, {"q", x.q}};
    case Theorem::fractional_sobolev:
    case Theorem::weak_besov: return {{"p", x.p}, {"q", x.q}, {"s", x.s}};
    case Theorem::bv: return {{"q", x.q}};
    case Theorem::general_besov: return {{"p", x.p}, {"q", detail::number(x.q)}, {"w", x.w}, {"s", x.s}};
    case Theorem::sobolev_corollary: return {{"p", x.p}, {"s", x.s}};
    }
    return {};
}

/// Default parameter grid per theorem.
inline std::vector<ParamPoint> default_params(Theorem t)
{
    std::vector<ParamPoint> g;
    switch (t) {
    case Theorem::local_lorentz:
    case Theorem::global_lorentz:
        for (double p : {0.5, 1.0}) {
            for (double q : {2.0, 4.0}) {
                for (double gm : {1.0, 2.0, infinity}) {
                    g.push_back({p, q, gm, 0, 0});
                }
            }
        }
        break;
    case Theorem::lq_corollary:
        for (auto [p, q] : {std::pair{0.5, 2.0}, std::pair{1.0, 2.0}, std::pair{1.0, 4.0}, std::pair{2.0, 4.0},
                            std::pair{2.0, 2.0}}) {
            g.push_back({p, q, 0, 0, 0});
        }
        break;
    case Theorem::fractional_sobolev:
    case Theorem::weak_besov:
        for (double p : {1.0, 2.0}) {
            for (double q : {3.0, 4.0}) {
                for (double s : {0.2, 0.4}) {
                    g.push_back({p, q, 0, s, 0});
                }
            }
        }
        break;
    case Theorem::bv:
        for (double q : {1.5, 2.0, 4.0}) {
            g.push_back({1.0, q, 0, 1.0, 0});
        }
        break;
    case Theorem::general_besov:
        for (double p : {2.0, 3.0}) {
            for (double q : {1.0, infinity}) {
                for (double w : {0.5, 1.0}) {
                    for (double s : {0.25, 0.5}) {
                        g.push_back({p, q, 0, s, w});
                    }
                }
            }
        }
        break;
    case Theorem::sobolev_corollary:
        for (double p : {2.0, 3.0}) {
            for (double s : {0.75, 0.9}) {
                g.push_back({p, 0, 0, s, 0});
            }
        }
        break;
    }
    return g;
}

/// Regularity of each fixture family, used to decide theorem hypotheses
/// symbolically (never from the grid).
struct Regularity {
    double besov_index;   // u in B^s_{p,inf} iff s <= index (capped at 1)
    double sobolev_index; // u in W^{s,p} (and B^s_{p,q}, q < inf) iff s < index
    bool gradient_in(double r, int dim) const { return r < gradient_limit * dim; }
    double gradient_limit;  // grad u in L^r iff r < gradient_limit * N
};

inline std::optional<Regularity> regularity(Generator g, double p, int dim)
{
    const double n = static_cast<double>(dim);
    switch (g) {
    case Generator::step:
    case Generator::multi_step:
    case Generator::disk_indicator:
    case Generator::square_indicator:
    case Generator::random_piecewise: return Regularity{1.0 / p, 1.0 / p, 0.0};
    case Generator::log_singular: return Regularity{std::min(1.0, n / p), n / p, 0.0};
    case Generator::hoelder_bump: return Regularity{std::min(1.0, 0.5 + n / p), 0.5 + n / p, 2.0};
    case Generator::gaussian_bump: return Regularity{1.0, infinity, infinity};
    case Generator::constant: return std::nullopt;
    }
    return std::nullopt;
}

/// Reason the theorem's hypotheses exclude the fixture, if any.
inline std::optional<std::string> hypothesis_exclusion(Theorem t, Generator g, const ParamPoint& x, int dim)
{
    if (g == Generator::constant) {
        return "constant function";
    }
    switch (t) {
    case Theorem::local_lorentz:
    case Theorem::global_lorentz:
    case Theorem::lq_corollary:
    case Theorem::bv: return std::nullopt;
    case Theorem::fractional_sobolev:
        if (!(x.s < regularity(g, x.p, dim)->sobolev_index)) {
            return "not in W^{s,p}";
        }
        return std::nullopt;
    case Theorem::weak_besov:
        if (!(x.s <= regularity(g, x.p, dim)->besov_index)) {
            return "not in B^s_{p,inf}";
        }
        return std::nullopt;
    case Theorem::general_besov: {
        const auto r = regularity(g, x.w, dim);
        const bool ok = std::isinf(x.q) ? x.s <= r->besov_index : x.s < r->sobolev_index;
        if (!ok) {
            return "not in B^s_{w,qw/p}";
        }
        return std::nullopt;
    }
    case Theorem::sobolev_corollary:
        if (!regularity(g, x.p, dim)->gradient_in(x.s * x.p, dim)) {
            return "gradient not in L^{sp}";
        }
        return std::nullopt;
    }
    return std::nullopt;
}

struct ScanSettings {
    double lattice_fraction = 0.25;  // lattice ball radius as a fraction of the cells per axis
    double bmo_pad_fraction = 0.25;  // zero padding for global BMO, fraction of cells per axis
    double gagliardo_cutoff = 2.0;   // cutoff radius as a multiple of the box diameter
    std::size_t stride_2d = 4;
    double amplitude_factor = 3.0;
    double dilation_factor = 2.5;
    double amplitude_tol = 1e-12;
    double dilation_tol = 1e-9;
    double drift_tol = 0.15;
};

/// Discrete BMO seminorm of the zero extension: padded grid, dyadic cubes.
inline double global_bmo(const GridFunction& u, const ScanSettings& st = {})
{
    const auto pad_cells = static_cast<std::size_t>(std::ceil(st.bmo_pad_fraction * static_cast<double>(u.domain().min_cells())));
    const GridFunction w = pad(u, pad_cells);
    const auto sizes = CubeSweepConfig::dyadic_sizes(w.domain());
    const auto cfg = w.domain().dim == 1 ? CubeSweepConfig::exhaustive(sizes) : CubeSweepConfig::strided(sizes, st.stride_2d);
    return bmo_seminorm(w, cfg).seminorm;
}

/// BMO seminorm over cubes inside the box.
inline double local_bmo(const GridFunction& u, const ScanSettings& st = {})
{
    const auto sizes = CubeSweepConfig::dyadic_sizes(u.domain());
    const auto cfg = u.domain().dim == 1 ? CubeSweepConfig::exhaustive(sizes) : CubeSweepConfig::strided(sizes, st.stride_2d);
    return bmo_seminorm(u, cfg).seminorm;
}

struct InequalityCase {
    std::string theorem;
    std::string fixture;
    nlohmann::json params;
    double lhs = 0.0;
    std::vector<std::pair<std::string, double>> factors;  // already raised to their exponents
    double ratio = 0.0;
    bool excluded = false;
    std::string reason;
};

inline nlohmann::json to_json(const InequalityCase& c)
{
    nlohmann::json f = nlohmann::json::object();
    for (const auto& [k, v] : c.factors) {
        f[k] = detail::number(v);
    }
    nlohmann::json j = {{"theorem", c.theorem}, {"fixture", c.fixture}, {"params", c.params},
                        {"lhs", detail::number(c.lhs)}, {"factors", f}, {"ratio", detail::number(c.ratio)},
                        {"excluded", c.excluded}};
    if (!c.reason.empty()) {
        j["reason"] = c.reason;
    }
    return j;
}

/// Quantities that depend only on the function, shared across parameter points.
struct ScanContext {
    GridFunction u;
    Generator generator;
    ScanSettings settings;
    double bmo_global = 0.0;
    double bmo_local = 0.0;
    ShiftLattice lattice;

    ScanContext(GridFunction f, Generator g, ScanSettings st) : u(std::move(f)), generator(g), settings(st)
    {
        bmo_global = global_bmo(u, settings);
        bmo_local = local_bmo(u, settings);
        const double radius = std::max(1.0, std::floor(settings.lattice_fraction * static_cast<double>(u.domain().min_cells())));
        lattice = ShiftLattice::ball(u.domain().dim, radius);
    }
};

/// One (theorem, fixture, parameter point) evaluation.
inline InequalityCase evaluate_case(Theorem t, const ScanContext& ctx, const ParamPoint& x)
{
    const auto& u = ctx.u;
    const int dim = u.domain().dim;
    InequalityCase c;
    c.theorem = std::string(to_string(t));
    c.fixture = std::string(to_string(ctx.generator));
    c.params = to_json(x, t);
    if (auto why = hypothesis_exclusion(t, ctx.generator, x, dim)) {
        c.excluded = true;
        c.reason = *why;
        return c;
    }
    const double bmo = t == Theorem::local_lorentz ? ctx.bmo_local : ctx.bmo_global;
    const double cutoff = ctx.settings.gagliardo_cutoff * u.domain().diameter();
    switch (t) {
    case Theorem::local_lorentz: {
        const double mean = pairwise_sum(u.values()) / static_cast<double>(u.size());
        const GridFunction v = u.shifted_by_constant(-mean);
        c.lhs = lorentz_norm(distribution(v, x.q), x.gamma);
        c.factors = {{"weak_lp", std::pow(weak_norm(v, x.p), x.p / x.q)}, {"bmo", std::pow(bmo, 1.0 - x.p / x.q)}};
        break;
    }
    case Theorem::global_lorentz:
        c.lhs = lorentz_norm(distribution(u, x.q), x.gamma);
        c.factors = {{"weak_lp", std::pow(weak_norm(u, x.p), x.p / x.q)}, {"bmo", std::pow(bmo, 1.0 - x.p / x.q)}};
        break;
    case Theorem::lq_corollary:
        c.lhs = lebesgue_norm(u, x.q);
        c.factors = {{"lp", std::pow(lebesgue_norm(u, x.p), x.p / x.q)}, {"bmo", std::pow(bmo, 1.0 - x.p / x.q)}};
        break;
    case Theorem::fractional_sobolev:
        c.lhs = gagliardo_seminorm(u, x.p * x.s / x.q, x.q, cutoff).value;
        c.factors = {{"weak_gagliardo", std::pow(gagliardo_weak_seminorm(u, x.s, x.p, cutoff), x.p / x.q)},
                     {"bmo", std::pow(bmo, 1.0 - x.p / x.q)}};
        break;
    case Theorem::weak_besov:
        c.lhs = besov_sup_norm(u, x.s * x.p / x.q, x.q, ctx.lattice).value;
        c.factors = {{"weak_besov", std::pow(besov_sup_norm_weak(u, x.s, x.p, ctx.lattice).value, x.p / x.q)},
                     {"bmo", std::pow(bmo, 1.0 - x.p / x.q)}};
        break;
    case Theorem::bv:
        c.lhs = besov_sup_norm(u, 1.0 / x.q, x.q, ctx.lattice).value;
        c.factors = {{"weak_bv", std::pow(bv_variation_weak(u, ctx.lattice).value, 1.0 / x.q)},
                     {"bmo", std::pow(bmo, 1.0 - 1.0 / x.q)}};
        break;
    case Theorem::general_besov: {
        const double inner_q = std::isinf(x.q) ? infinity : x.q * x.w / x.p;
        c.lhs = besov_integral_norm(u, x.s * x.w / x.p, x.p, x.q, ctx.lattice).value;
        c.factors = {{"besov_w", std::pow(besov_integral_norm(u, x.s, x.w, inner_q, ctx.lattice).value, x.w / x.p)},
                     {"bmo", std::pow(bmo, 1.0 - x.w / x.p)}};
        break;
    }
    case Theorem::sobolev_corollary: {
        const auto g = central_gradient(u);
        const auto& gd = g.front().domain();
        std::vector<double> mag(gd.size());
        for (std::size_t i = 0; i < gd.size(); ++i) {
            double sq = 0.0;
            for (const auto& gi : g) {
                sq += gi[i] * gi[i];
            }
            mag[i] = std::sqrt(sq);
        }
        const double grad = lebesgue_norm(GridFunction(gd, std::move(mag)), x.s * x.p);
        c.lhs = gagliardo_seminorm(u, x.s, x.p, cutoff).value;
        c.factors = {{"grad_lsp", std::pow(grad, x.s)}, {"bmo", std::pow(bmo, 1.0 - x.s)}};
        break;
    }
    }
    double denom = 1.0;
    for (const auto& f : c.factors) {
        denom *= f.second;
    }
    if (!(denom > 0.0)) {
        c.excluded = true;
        c.reason = "vanishing factor";
        c.ratio = c.lhs > 0.0 ? infinity : 0.0;
        return c;
    }
    c.ratio = c.lhs / denom;
    return c;
}

struct ScanOptions {
    std::vector<Generator> fixtures{Generator::step, Generator::log_singular, Generator::hoelder_bump,
                                    Generator::constant};
    int dim = 1;
    std::size_t cells = 256;  // base resolution; refinement uses twice this
    std::vector<ParamPoint> params;  // empty: default grid
    ScanSettings settings;
};

struct RatioScan {
    Theorem theorem = Theorem::lq_corollary;
    std::vector<InequalityCase> cases;  // base resolution
    double max_ratio = 0.0;
    double max_ratio_refined = 0.0;
    double amplitude_dev = 0.0;  // largest relative ratio change under u -> c u
    double dilation_dev = 0.0;   // largest relative ratio change under dilation
    double drift = 0.0;          // |refined / base - 1| of the max ratio
    bool finite = true;
    std::size_t evaluated = 0;
    std::size_t excluded = 0;
    bool pass = false;
};

namespace detail {
inline double rel_dev(double a, double b)
{
    if (a == b) {
        return 0.0;
    }
    return std::fabs(a - b) / std::max(std::fabs(a), std::fabs(b));
}
}  // namespace detail

/// Ratio scan of one theorem over fixtures x parameter grid.
inline RatioScan bmo_ratio_scan(Theorem t, const ScanOptions& opt)
{
    const auto params = opt.params.empty() ? default_params(t) : opt.params;
    if (params.empty() || opt.fixtures.empty()) {
        throw std::invalid_argument("bmo_ratio_scan: empty fixture family or parameter grid");
    }
    const auto& st = opt.settings;
    RatioScan r;
    r.theorem = t;
    for (Generator g : opt.fixtures) {
        FixtureSpec spec;
        spec.generator = g;
        spec.dim = opt.dim;
        spec.cells = opt.cells;
        const GridFunction u = generate_fixture(spec).u;
        spec.cells = 2 * opt.cells;
        const GridFunction fine = generate_fixture(spec).u;
        const ScanContext base(u, g, st);
        const ScanContext amp(u.scaled(st.amplitude_factor), g, st);
        const ScanContext dil(u.dilated(st.dilation_factor), g, st);
        const ScanContext ref(fine, g, st);
        for (const auto& x : params) {
            auto c = evaluate_case(t, base, x);
            if (c.excluded) {
                ++r.excluded;
                r.cases.push_back(std::move(c));
                continue;
            }
            ++r.evaluated;
            const auto ca = evaluate_case(t, amp, x);
            const auto cd = evaluate_case(t, dil, x);
            const auto cr = evaluate_case(t, ref, x);
            r.finite = r.finite && std::isfinite(c.ratio) && std::isfinite(cr.ratio) && !ca.excluded && !cd.excluded &&
                       !cr.excluded;
            r.amplitude_dev = std::max(r.amplitude_dev, detail::rel_dev(c.ratio, ca.ratio));
            r.dilation_dev = std::max(r.dilation_dev, detail::rel_dev(c.ratio, cd.ratio));
            r.max_ratio = std::max(r.max_ratio, c.ratio);
            r.max_ratio_refined = std::max(r.max_ratio_refined, cr.ratio);
            r.cases.push_back(std::move(c));
        }
    }
    r.drift = r.max_ratio > 0.0 ? std::fabs(r.max_ratio_refined / r.max_ratio - 1.0) : 0.0;
    r.pass = r.evaluated > 0 && r.finite && r.amplitude_dev <= st.amplitude_tol && r.dilation_dev <= st.dilation_tol &&
             r.drift <= st.drift_tol;
    return r;
}

inline Report to_report(const RatioScan& s, const ScanOptions& opt)
{
    Report r;
    r.op = "ratio_scan:" + std::string(to_string(s.theorem));
    nlohmann::json fx = nlohmann::json::array();
    for (auto g : opt.fixtures) {
        fx.push_back(to_string(g));
    }
    r.params = {{"fixtures", fx}, {"dim", opt.dim}, {"cells", opt.cells}};
    r.lhs = s.max_ratio;
    r.rhs = s.max_ratio_refined;
    r.ratio = s.max_ratio > 0.0 ? s.max_ratio_refined / s.max_ratio : 0.0;
    r.pass = s.pass;
    r.tolerance = opt.settings.drift_tol;
    nlohmann::json cases = nlohmann::json::array();
    for (const auto& c : s.cases) {
        cases.push_back(to_json(c));
    }
    r.extra = {{"finite", s.finite},
               {"amplitude_dev", s.amplitude_dev},
               {"amplitude_tol", opt.settings.amplitude_tol},
               {"dilation_dev", s.dilation_dev},
               {"dilation_tol", opt.settings.dilation_tol},
               {"drift", s.drift},
               {"evaluated", s.evaluated},
               {"excluded", s.excluded},
               {"cases", cases}};
    return r;
}

// ------------------------------------------------------------ sandwich

struct SandwichTerms {
    double level_term = 0.0;   // (q/g)^{1/g} k L{|v| > k}^{1/q}
    double weak_term = 0.0;    // (q/g)^{1/g} [chi v]_{L^q_w}
    double lorentz_term = 0.0; // ||chi v||_{L^{q,g}}
    double level_measure = 0.0;
};

/// The three-term chain for v = u (global) or v = u - u_Q (cube = whole box).
inline SandwichTerms sandwich_terms(const GridFunction& u, double k, double q, double gamma, bool local = false)
{
    if (!(k >= 0.0) || !(q > 0.0) || !(gamma > 0.0) || std::isinf(gamma)) {
        throw std::invalid_argument("sandwich: need k >= 0 and finite positive q, gamma");
    }
    GridFunction v = u;
    if (local) {
        v = u.shifted_by_constant(-pairwise_sum(u.values()) / static_cast<double>(u.size()));
    }
    const GridFunction cut = v.map([k](double x) { return std::fabs(x) > k ? x : 0.0; });
    std::size_t above = 0;
    for (double x : v.values()) {
        above += std::fabs(x) > k ? 1 : 0;
    }
    SandwichTerms s;
    s.level_measure = static_cast<double>(above) * u.domain().cell_volume();
    const double c = std::pow(q / gamma, 1.0 / gamma);
    s.level_term = c * k * std::pow(s.level_measure, 1.0 / q);
    s.weak_term = c * weak_norm(cut, q);
    s.lorentz_term = lorentz_norm(distribution(cut, q), gamma);
    return s;
}

/// Asserts the two explicit inequalities of the chain; records
/// ||chi v||_{L^{q,g}} / (k L{|v|>k}^{1/q}) as the empirical constant.
inline Report char_sandwich_check(const GridFunction& u, double k, double q, double gamma, bool local = false,
                                  std::optional<double> bmo = std::nullopt, double tol = 1e-9)
{
    const auto s = sandwich_terms(u, k, q, gamma, local);
    const double b = bmo ? *bmo : (local ? local_bmo(u) : global_bmo(u));
    const double floor_abs = 1e-12 * std::max(u.max_abs(), 1e-300);
    const auto r1 = Report::inequality("sandwich_1", s.level_term, s.weak_term, tol, {}, floor_abs);
    const auto r2 = Report::inequality("sandwich_2", s.weak_term, s.lorentz_term, tol, {}, floor_abs);
    Report r;
    r.op = "char_sandwich";
    r.params = {{"k", k}, {"q", q}, {"gamma", gamma}, {"local", local}};
    const double base = k * std::pow(s.level_measure, 1.0 / q);
    r.lhs = s.lorentz_term;
    r.rhs = base;
    r.ratio = base > 0.0 ? s.lorentz_term / base : 0.0;
    r.tolerance = tol;
    r.pass = r1.pass && r2.pass;
    r.extra = {{"level_term", s.level_term},  {"weak_term", s.weak_term}, {"lorentz_term", s.lorentz_term},
               {"bmo", b},                    {"hypothesis_ok", k >= b},   {"chain_1", r1.pass},
               {"chain_2", r2.pass}};
    return r;
}

// ------------------------------------------------------------ VMO

struct ShiftEnergy {
    std::vector<double> lengths;
    std::vector<double> energy;  // int |u(x+h) - u(x)|^q / |h|^{sp} dx
};

/// E(h) along the given offsets (expected in decreasing length).
inline ShiftEnergy shift_energy(const GridFunction& u, const std::vector<Offset>& shifts, double p, double q, double s,
                                DifferenceSupport support = DifferenceSupport::whole_space)
{
    ShiftEnergy e;
    for (const auto& o : shifts) {
        const double len = u.domain().length(o);
        e.lengths.push_back(len);
        e.energy.push_back(difference_power_sum(u, o, 1, q, support) / std::pow(len, s * p));
    }
    return e;
}

/// Offsets along the first axis: `count` lengths geometric from max_cells down to 1.
inline std::vector<Offset> geometric_shifts(std::size_t max_cells, std::size_t count)
{
    std::vector<Offset> o;
    for (std::size_t i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        const auto m = static_cast<std::ptrdiff_t>(std::llround(std::pow(static_cast<double>(max_cells), 1.0 - f)));
        if (o.empty() || m != o.back()[0]) {
            o.push_back({m, 0});
        }
    }
    return o;
}

/// Vanishing: E decreases along the schedule and E(h_min) <= ratio * E(h_max).
inline Report vmo_vanishing_check(const GridFunction& u, double p, double q, double s, const std::vector<Offset>& shifts,
                                  double ratio_bound = 0.1, double tol = 1e-9)
{
    if (!(p < q) || !(s > 0.0 && s < 1.0)) {
        throw std::invalid_argument("vmo_vanishing_check: need p < q and 0 < s < 1");
    }
    const auto e = shift_energy(u, shifts, p, q, s);
    bool monotone = true;
    for (std::size_t i = 1; i < e.energy.size(); ++i) {
        monotone = monotone && e.energy[i] <= e.energy[i - 1] * (1.0 + tol);
    }
    auto r = Report::inequality("vmo_vanishing", e.energy.back(), ratio_bound * e.energy.front(), tol,
                                {{"p", p}, {"q", q}, {"s", s}});
    r.pass = r.pass && monotone;
    r.extra = {{"monotone", monotone}, {"lengths", e.lengths}, {"energy", e.energy}, {"ratio_bound", ratio_bound}};
    return r;
}

/// Non-vanishing at p = q: every E(h) stays within [lo, hi] * expected.
inline Report vmo_persistence_check(const GridFunction& u, double p, double s, const std::vector<Offset>& shifts,
                                    double expected, double band = 0.1,
                                    DifferenceSupport support = DifferenceSupport::inside_box)
{
    const auto e = shift_energy(u, shifts, p, p, s, support);
    double worst = 0.0;
    for (double x : e.energy) {
        worst = std::max(worst, std::fabs(x / expected - 1.0));
    }
    Report r;
    r.op = "vmo_persistence";
    r.params = {{"p", p}, {"q", p}, {"s", s}, {"support", to_string(support)}};
    r.lhs = *std::min_element(e.energy.begin(), e.energy.end());
    r.rhs = expected;
    r.ratio = r.lhs / expected;
    r.tolerance = band;
    r.pass = worst <= band;
    r.extra = {{"lengths", e.lengths}, {"energy", e.energy}, {"max_rel_dev", worst}};
    return r;
}

// ------------------------------------------------------------ translations

/// Chain for v = u(. + h) - u at level k >= ||u||_BMO:
///   int |v|^q <= C int min(|v|,k)^q <= C k^{q-p} sup_{s<=k^p} s L{|v|^p > s} <= C k^{q-p} [v]^p_{L^p_w}.
/// The two explicit steps are asserted: the middle one with constant (1 - p/q)^{-1}
/// and the last one exactly. The outer ratio is recorded.
inline Report translation_interp_check(const GridFunction& u, Offset h, double p, double q, double k,
                                       std::optional<double> bmo = std::nullopt, double tol = 1e-9)
{
    if (!(p > 0.0 && p < q) || !(k > 0.0)) {
        throw std::invalid_argument("translation_interp_check: need 0 < p < q and k > 0");
    }
    const double b = bmo ? *bmo : global_bmo(u);
    const auto& d = u.domain();
    auto vals = difference_values(u, h, 1);
    const double vol = d.cell_volume();
    std::vector<double> full(vals.size()), low(vals.size());
    std::vector<std::pair<double, double>> samples;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const double a = std::fabs(vals[i]);
        full[i] = std::pow(a, q);
        low[i] = std::pow(std::min(a, k), q);
        samples.emplace_back(a, vol);
    }
    const double lhs = pairwise_sum(full) * vol;
    const double mid = pairwise_sum(low) * vol;
    const DistributionCurve dp(samples, p);
    const double trunc = std::pow(k, q - p) * truncated_sup(dp, std::pow(k, p));
    const double weak = std::pow(k, q - p) * weak_sup(dp);
    const double floor_abs = 1e-12 * std::pow(std::max(u.max_abs(), 1e-300), q) * d.measure();
    const auto r1 = Report::inequality("min_le_full", mid, lhs, tol, {}, floor_abs);
    const auto r2 = Report::inequality("min_le_trunc", mid, trunc / (1.0 - p / q), tol, {}, floor_abs);
    const auto r3 = Report::inequality("trunc_le_weak", trunc, weak, tol, {}, floor_abs);
    Report r;
    r.op = "translation_interp";
    r.params = {{"h", {h[0], h[1]}}, {"p", p}, {"q", q}, {"k", k}};
    r.lhs = lhs;
    r.rhs = trunc;
    r.ratio = trunc > 0.0 ? lhs / trunc : (lhs > 0.0 ? infinity : 0.0);
    r.tolerance = tol;
    r.pass = r1.pass && r2.pass && r3.pass;
    r.extra = {{"min_term", mid}, {"weak_term", weak},       {"bmo", b},
               {"hypothesis_ok", k >= b}, {"min_le_full", r1.pass}, {"min_le_trunc", r2.pass},
               {"trunc_le_weak", r3.pass}};
    return r;
}

// ------------------------------------------------------------ averages

/// Averages of |u| over centered cubes of the zero extension whose edge grows
/// by `growth` cells per step. Expected to decrease towards 0.
inline std::vector<double> nested_cube_averages(const GridFunction& u, std::size_t steps, std::size_t growth)
{
    const GridFunction w = pad(u, steps * growth);
    const auto& d = w.domain();
    std::vector<double> out;
    for (std::size_t i = 0; i <= steps; ++i) {
        const std::size_t margin = (steps - i) * growth;
        CellBlock b;
        b.lo = {static_cast<std::ptrdiff_t>(margin), d.dim == 2 ? static_cast<std::ptrdiff_t>(margin) : 0};
        b.extent = {d.cells[0] - 2 * margin, d.dim == 2 ? d.cells[1] - 2 * margin : 1};
        out.push_back(abs_average(w, b));
    }
    return out;
}

}  // namespace oscillab
