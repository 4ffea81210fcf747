#pragma once

// Mean oscillation, BMO seminorms over discrete cube families, the VMO
// modulus, and John-Nirenberg level-set probes.
//
// A "cube" is a CellBlock with equal extent along every axis. Sweeps cover
// every grid-aligned cube of the requested edge lengths, so the discrete
// seminorm is a lower bound for the continuum one at every resolution.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "grid.hpp"
#include "parallel.hpp"
#include "summed_area_table.hpp"

namespace oscillab {

enum class OscillationForm { mean_osc, double_avg };

inline std::string_view to_string(OscillationForm f) { return f == OscillationForm::mean_osc ? "mean_osc" : "double_avg"; }

inline OscillationForm oscillation_form_from_string(std::string_view s)
{
    if (s == "mean_osc") return OscillationForm::mean_osc;
    if (s == "double_avg") return OscillationForm::double_avg;
    throw std::invalid_argument("unknown oscillation form: " + std::string(s));
}

enum class SweepMode { exhaustive, strided };

struct CubeSweepConfig {
    SweepMode mode = SweepMode::exhaustive;
    std::vector<std::size_t> sizes;
    std::size_t stride = 1;

    static CubeSweepConfig exhaustive(std::vector<std::size_t> sizes) { return {SweepMode::exhaustive, std::move(sizes), 1}; }

    static CubeSweepConfig strided(std::vector<std::size_t> sizes, std::size_t stride)
    {
        return {SweepMode::strided, std::move(sizes), stride};
    }

    /// Every edge length from 1 to the smallest axis.
    static std::vector<std::size_t> all_sizes(const GridDomain& d)
    {
        std::vector<std::size_t> s(d.min_cells());
        for (std::size_t i = 0; i < s.size(); ++i) {
            s[i] = i + 1;
        }
        return s;
    }

    /// Powers of two up to the smallest axis, plus the full axis length.
    static std::vector<std::size_t> dyadic_sizes(const GridDomain& d)
    {
        std::vector<std::size_t> s;
        const std::size_t n = d.min_cells();
        for (std::size_t m = 1; m <= n; m *= 2) {
            s.push_back(m);
        }
        if (s.back() != n) {
            s.push_back(n);
        }
        return s;
    }

    void validate(const GridDomain& d) const
    {
        if (sizes.empty()) {
            throw std::invalid_argument("CubeSweepConfig: size set is empty");
        }
        for (auto m : sizes) {
            if (m < 1 || m > d.min_cells()) {
                throw std::invalid_argument("CubeSweepConfig: cube size " + std::to_string(m) + " out of range");
            }
        }
        if (stride < 1) {
            throw std::invalid_argument("CubeSweepConfig: stride must be >= 1");
        }
    }

    [[nodiscard]] std::size_t step() const { return mode == SweepMode::exhaustive ? 1 : stride; }
};

struct OscillationResult {
    double seminorm = 0.0;
    CellBlock argmax_cube{};
    OscillationForm form = OscillationForm::double_avg;
    std::size_t cubes_tested = 0;
};

namespace detail {
inline void check_block(const GridFunction& u, const CellBlock& b)
{
    if (!b.inside(u.domain())) {
        throw std::invalid_argument("cube lies outside the grid");
    }
}

inline std::vector<double> block_values(const GridFunction& u, const CellBlock& b)
{
    std::vector<double> v;
    v.reserve(b.count());
    const auto n1 = u.domain().cells[1];
    for (std::size_t i = 0; i < b.extent[0]; ++i) {
        const std::size_t row = (static_cast<std::size_t>(b.lo[0]) + i) * n1 + static_cast<std::size_t>(b.lo[1]);
        for (std::size_t j = 0; j < b.extent[1]; ++j) {
            v.push_back(u[row + j]);
        }
    }
    return v;
}

// (1/m) sum |v_i - mean| from sorted values and their prefix sums.
inline double mean_oscillation_sorted(const std::vector<double>& sorted, double mean)
{
    const std::size_t m = sorted.size();
    const auto split = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), mean) - sorted.begin());
    const double below = pairwise_sum(std::span<const double>(sorted).first(split));
    const double above = pairwise_sum(std::span<const double>(sorted).subspan(split));
    const double lo = mean * static_cast<double>(split) - below;
    const double hi = above - mean * static_cast<double>(m - split);
    return std::max(0.0, lo + hi) / static_cast<double>(m);
}

// Mean absolute pairwise difference over all ordered pairs, computed from
// the gaps of the sorted values: (2/m^2) sum_k k (m-k) (v_(k+1) - v_(k)).
inline double double_average_sorted(const std::vector<double>& sorted)
{
    const std::size_t m = sorted.size();
    if (m < 2) {
        return 0.0;
    }
    std::vector<double> terms(m - 1);
    for (std::size_t k = 1; k < m; ++k) {
        const double gap = sorted[k] - sorted[k - 1];
        terms[k - 1] = gap * static_cast<double>(k) * static_cast<double>(m - k);
    }
    const double md = static_cast<double>(m);
    return 2.0 * pairwise_sum(terms) / (md * md);
}
}  // namespace detail

/// Average of u over the block via a summed-area table.
inline double cube_mean(const SummedAreaTable& sat, const CellBlock& b)
{
    return sat.box_sum(b) / static_cast<double>(b.count());
}

inline double cube_mean(const GridFunction& u, const CellBlock& b)
{
    detail::check_block(u, b);
    return pairwise_sum(detail::block_values(u, b)) / static_cast<double>(b.count());
}

/// Average of |u - u_C| over the block.
inline double mean_oscillation(const GridFunction& u, const CellBlock& b)
{
    detail::check_block(u, b);
    auto v = detail::block_values(u, b);
    const double mean = pairwise_sum(v) / static_cast<double>(v.size());
    std::sort(v.begin(), v.end());
    return detail::mean_oscillation_sorted(v, mean);
}

/// Average of |u(z) - u(x)| over all pairs (x, z) in the block.
inline double double_average_oscillation(const GridFunction& u, const CellBlock& b)
{
    detail::check_block(u, b);
    auto v = detail::block_values(u, b);
    std::sort(v.begin(), v.end());
    return detail::double_average_sorted(v);
}

inline double oscillation(const GridFunction& u, const CellBlock& b, OscillationForm form)
{
    return form == OscillationForm::mean_osc ? mean_oscillation(u, b) : double_average_oscillation(u, b);
}

/// Every cube of the sweep, ordered by (size index, row offset, column offset).
inline std::vector<CellBlock> sweep_cubes(const GridDomain& d, const CubeSweepConfig& cfg)
{
    cfg.validate(d);
    std::vector<CellBlock> cubes;
    const std::size_t step = cfg.step();
    for (auto m : cfg.sizes) {
        const std::size_t last0 = d.cells[0] - m;
        const std::size_t last1 = d.dim == 2 ? d.cells[1] - m : 0;
        for (std::size_t i = 0; i <= last0; i += step) {
            for (std::size_t j = 0; j <= last1; j += step) {
                cubes.push_back(CellBlock::cube(d, {static_cast<std::ptrdiff_t>(i), static_cast<std::ptrdiff_t>(j)}, m));
            }
        }
    }
    return cubes;
}

/// Supremum of the chosen oscillation over the sweep, with its argmax.
inline OscillationResult bmo_seminorm(const GridFunction& u, const CubeSweepConfig& cfg,
                                      OscillationForm form = OscillationForm::double_avg)
{
    const auto cubes = sweep_cubes(u.domain(), cfg);
    const auto values = parallel_map<double>(cubes.size(), [&](std::size_t i) { return oscillation(u, cubes[i], form); });
    const std::size_t best = deterministic_argmax(values);
    return {values[best], cubes[best], form, cubes.size()};
}

/// Exhaustive double-average seminorm over dyadic cube sizes.
inline double bmo_norm(const GridFunction& u)
{
    return bmo_seminorm(u, CubeSweepConfig::exhaustive(CubeSweepConfig::dyadic_sizes(u.domain()))).seminorm;
}

struct VmoPoint {
    double radius = 0.0;
    double value = 0.0;
    bool unresolved = false;  // radius below one cell diameter
};

/// R -> sup of the oscillation over sweep cubes with diameter <= R.
inline std::vector<VmoPoint> vmo_modulus(const GridFunction& u, const CubeSweepConfig& cfg,
                                         const std::vector<double>& radii,
                                         OscillationForm form = OscillationForm::double_avg)
{
    if (!std::is_sorted(radii.begin(), radii.end())) {
        throw std::invalid_argument("vmo_modulus: radii must be increasing");
    }
    const auto& d = u.domain();
    cfg.validate(d);
    auto sizes = cfg.sizes;
    std::sort(sizes.begin(), sizes.end());
    const double root_n = std::sqrt(static_cast<double>(d.dim));
    std::vector<double> per_size(sizes.size());
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        CubeSweepConfig one = cfg;
        one.sizes = {sizes[k]};
        per_size[k] = bmo_seminorm(u, one, form).seminorm;
    }
    std::vector<VmoPoint> out;
    for (double r : radii) {
        VmoPoint pt{r, 0.0, r < d.spacing * root_n};
        for (std::size_t k = 0; k < sizes.size(); ++k) {
            const double diam = static_cast<double>(sizes[k]) * d.spacing * root_n;
            if (diam <= r * (1.0 + 1e-12)) {
                pt.value = std::max(pt.value, per_size[k]);
            }
        }
        out.push_back(pt);
    }
    return out;
}

/// Sub-grid covering the block.
inline GridFunction extract(const GridFunction& u, const CellBlock& b)
{
    detail::check_block(u, b);
    const auto& d = u.domain();
    GridDomain sub(d.dim,
                   {d.origin[0] + static_cast<double>(b.lo[0]) * d.spacing,
                    d.origin[1] + static_cast<double>(b.lo[1]) * d.spacing},
                   b.extent, d.spacing);
    return {sub, detail::block_values(u, b)};
}

/// Average of |u| over the block.
inline double abs_average(const GridFunction& u, const CellBlock& b)
{
    detail::check_block(u, b);
    auto v = detail::block_values(u, b);
    for (double& x : v) {
        x = std::fabs(x);
    }
    return pairwise_sum(v) / static_cast<double>(v.size());
}

struct JnDecay {
    std::vector<double> sigma;
    std::vector<double> measure;  // measure{x in C : |u - u_C| > sigma}
    double bmo = 0.0;             // double-average seminorm on the cube
    double tail_threshold = 0.0;  // fit window starts at sigma >= 2 * bmo
    double slope = 0.0;           // least-squares slope of log(measure) vs sigma on the tail
    double intercept = 0.0;
    double r_squared = 0.0;
    std::size_t tail_points = 0;
};

/// Level-set measures of |u - u_C| on the cube and an exponential tail fit.
inline JnDecay jn_decay_probe(const GridFunction& u, const CellBlock& cube, const std::vector<double>& sigmas,
                              std::optional<double> bmo = std::nullopt)
{
    detail::check_block(u, cube);
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        if (!(sigmas[i] > 0.0) || (i > 0 && !(sigmas[i] > sigmas[i - 1]))) {
            throw std::invalid_argument("jn_decay_probe: sigma values must be positive and increasing");
        }
    }
    JnDecay out;
    out.bmo = bmo ? *bmo : bmo_norm(extract(u, cube));
    out.tail_threshold = 2.0 * out.bmo;
    auto v = detail::block_values(u, cube);
    const double mean = pairwise_sum(v) / static_cast<double>(v.size());
    for (double& x : v) {
        x = std::fabs(x - mean);
    }
    std::sort(v.begin(), v.end());
    const double vol = u.domain().cell_volume();
    std::vector<double> xs;
    std::vector<double> ys;
    for (double s : sigmas) {
        const auto above = static_cast<std::size_t>(v.end() - std::upper_bound(v.begin(), v.end(), s));
        const double m = static_cast<double>(above) * vol;
        out.sigma.push_back(s);
        out.measure.push_back(m);
        if (s >= out.tail_threshold && m > 0.0) {
            xs.push_back(s);
            ys.push_back(std::log(m));
        }
    }
    out.tail_points = xs.size();
    if (xs.size() >= 2) {
        const double n = static_cast<double>(xs.size());
        double sx = 0.0, sy = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
        }
        const double mx = sx / n;
        const double my = sy / n;
        double sxx = 0.0, sxy = 0.0, syy = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxx += (xs[i] - mx) * (xs[i] - mx);
            sxy += (xs[i] - mx) * (ys[i] - my);
            syy += (ys[i] - my) * (ys[i] - my);
        }
        out.slope = sxx > 0.0 ? sxy / sxx : 0.0;
        out.intercept = my - out.slope * mx;
        out.r_squared = (sxx > 0.0 && syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 0.0;
    }
    return out;
}

}  // namespace oscillab
