#pragma once

// Directional and kernel-averaged jump energies, epsilon sweeps with
// Richardson extrapolation, and symbolic ground truth for synthetic shapes.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "kernel.hpp"
#include "parallel.hpp"

namespace oscillab {

using Vec2 = std::array<double, 2>;

namespace detail {
inline void check_energy_args(const GridFunction& u, const CellMask& region, double q, double eps)
{
    if (!(region.domain() == u.domain())) {
        throw std::invalid_argument("jump energy: region mask does not match the grid");
    }
    if (!(q > 1.0)) {
        throw std::invalid_argument("jump energy: q must exceed 1");
    }
    if (!(eps > 0.0)) {
        throw std::invalid_argument("jump energy: eps must be positive");
    }
    if (eps > u.domain().diameter()) {
        throw std::invalid_argument("jump energy: eps exceeds the box diameter");
    }
}
}  // namespace detail

/// int_B chi_B(x + eps n) |u(x + eps n) - u(x)|^q / eps dx.
///
/// Evaluated exactly for the piecewise-constant u and a cellular B: the cell
/// translated by eps*n overlaps at most 2^N cells, and each overlap area (the
/// bilinear weight) multiplies that cell's |u_j - u_i|^q and chi_B(j).
inline double directional_energy(const GridFunction& u, const CellMask& region, Vec2 n, double q, double eps)
{
    detail::check_energy_args(u, region, q, eps);
    const auto& d = u.domain();
    if (d.dim == 1) {
        n[1] = 0.0;
    }
    if (std::fabs(std::hypot(n[0], n[1]) - 1.0) > 1e-12) {
        throw std::invalid_argument("directional_energy: direction must be a unit vector");
    }
    std::array<std::ptrdiff_t, 2> base{};
    std::array<double, 2> frac{};
    for (std::size_t a = 0; a < 2; ++a) {
        const double cells = eps * n[a] / d.spacing;
        const double f = std::floor(cells);
        base[a] = static_cast<std::ptrdiff_t>(f);
        frac[a] = cells - f;
    }
    struct Tap {
        Offset o;
        double w;
    };
    std::vector<Tap> taps;
    for (std::ptrdiff_t b0 = 0; b0 <= 1; ++b0) {
        for (std::ptrdiff_t b1 = 0; b1 <= 1; ++b1) {
            const double w = (b0 ? frac[0] : 1.0 - frac[0]) * (b1 ? frac[1] : 1.0 - frac[1]);
            if (w > 0.0) {
                taps.push_back({{base[0] + b0, base[1] + b1}, w});
            }
        }
    }
    const auto parts = parallel_map<double>(d.cells[0], [&](std::size_t row) {
        double s = 0.0;
        for (std::size_t col = 0; col < d.cells[1]; ++col) {
            const std::size_t i = row * d.cells[1] + col;
            if (!region[i]) {
                continue;
            }
            const CellIndex c{static_cast<std::ptrdiff_t>(row), static_cast<std::ptrdiff_t>(col)};
            for (const auto& t : taps) {
                const CellIndex j{c[0] + t.o[0], c[1] + t.o[1]};
                if (!region.contains(j)) {
                    continue;
                }
                const double diff = std::fabs(u.at(j) - u[i]);
                if (diff != 0.0) {
                    s += t.w * (q == 2.0 ? diff * diff : std::pow(diff, q));
                }
            }
        }
        return s;
    });
    return pairwise_sum(parts) * d.cell_volume() / eps;
}

struct KernelEnergy {
    double value = 0.0;
    bool under_resolved = false;  // effective radius below one spacing
};

/// int_B int_B rho_eps(|x - y|) |u(x) - u(y)|^q / |x - y| dy dx over cell-center pairs.
/// The sampled kernel is renormalized to unit discrete mass, as in mollify.
inline KernelEnergy kernel_energy(const GridFunction& u, const CellMask& region, const KernelFamily& kernel, double q,
                                  double eps)
{
    detail::check_energy_args(u, region, q, eps);
    const auto& d = u.domain();
    if (kernel.dim() != d.dim) {
        throw std::invalid_argument("kernel_energy: kernel dimension does not match grid");
    }
    const double reach = kernel.effective_radius(eps) / d.spacing;
    const auto r = static_cast<std::ptrdiff_t>(std::floor(reach));
    const std::ptrdiff_t r1 = d.dim == 2 ? r : 0;
    // discrete mass over all offsets, including the centre tap
    double mass = 0.0;
    std::vector<Offset> half;
    std::vector<double> weight;
    for (std::ptrdiff_t a = -r; a <= r; ++a) {
        for (std::ptrdiff_t b = -r1; b <= r1; ++b) {
            const double len = d.length({a, b});
            const double w = kernel.profile(len, eps);
            if (w <= 0.0) {
                continue;
            }
            mass += w * d.cell_volume();
            if (a > 0 || (a == 0 && b > 0)) {
                half.push_back({a, b});
                weight.push_back(w / len);
            }
        }
    }
    KernelEnergy out;
    out.under_resolved = kernel.effective_radius(eps) < d.spacing;
    if (half.empty() || mass <= 0.0) {
        return out;
    }
    const bool full = region.count() == d.size();
    const auto n0 = static_cast<std::ptrdiff_t>(d.cells[0]);
    const auto n1 = static_cast<std::ptrdiff_t>(d.cells[1]);
    const auto vals = u.values();
    const auto parts = parallel_map<double>(half.size(), [&](std::size_t k) {
        const auto o = half[k];
        const std::ptrdiff_t i_lo = std::max<std::ptrdiff_t>(0, -o[0]);
        const std::ptrdiff_t i_hi = std::min(n0, n0 - o[0]);
        const std::ptrdiff_t j_lo = std::max<std::ptrdiff_t>(0, -o[1]);
        const std::ptrdiff_t j_hi = std::min(n1, n1 - o[1]);
        double s = 0.0;
        for (std::ptrdiff_t i = i_lo; i < i_hi; ++i) {
            const double* row = vals.data() + i * n1;
            const double* other = vals.data() + (i + o[0]) * n1 + o[1];
            double rs = 0.0;
            if (full && q == 2.0) {
                for (std::ptrdiff_t j = j_lo; j < j_hi; ++j) {
                    const double diff = other[j] - row[j];
                    rs += diff * diff;
                }
            } else {
                for (std::ptrdiff_t j = j_lo; j < j_hi; ++j) {
                    if (!full && (!region.contains({i, j}) || !region.contains({i + o[0], j + o[1]}))) {
                        continue;
                    }
                    const double diff = std::fabs(other[j] - row[j]);
                    if (diff != 0.0) {
                        rs += std::pow(diff, q);
                    }
                }
            }
            s += rs;
        }
        return s * weight[k];
    });
    // each unordered offset pair counted for (x, y) and (y, x)
    const double vol = d.cell_volume();
    out.value = 2.0 * pairwise_sum(parts) * vol * vol / mass;
    return out;
}

/// n points from start down to end, equally spaced in log.
inline std::vector<double> geometric_schedule(double start, double end, std::size_t count)
{
    if (!(start > end) || !(end > 0.0) || count < 2) {
        throw std::invalid_argument("geometric_schedule: need start > end > 0 and at least 2 points");
    }
    std::vector<double> e(count);
    const double r = std::log(end / start) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        e[i] = start * std::exp(r * static_cast<double>(i));
    }
    e.back() = end;
    return e;
}

enum class EnergyMode { directional, kernel };

struct EnergyCurve {
    EnergyMode mode = EnergyMode::directional;
    std::string label;  // direction or kernel id
    double q = 2.0;
    std::vector<double> eps;
    std::vector<double> energy;
    double limit = 0.0;        // Richardson estimate from the last two points
    double uncertainty = 0.0;  // |E_n - E_{n-1}|
    bool under_resolved = false;
};

/// Richardson step assuming E(eps) = L + c * eps.
inline std::pair<double, double> richardson(const std::vector<double>& eps, const std::vector<double>& e)
{
    const std::size_t n = e.size();
    if (n < 2) {
        throw std::invalid_argument("richardson: need two points");
    }
    const double e1 = e[n - 2], e2 = e[n - 1];
    const double h1 = eps[n - 2], h2 = eps[n - 1];
    return {e2 + (e2 - e1) * h2 / (h1 - h2), std::fabs(e2 - e1)};
}

namespace detail {
inline void check_schedule(const GridFunction& u, const std::vector<double>& eps)
{
    if (eps.size() < 3) {
        throw std::invalid_argument("energy_sweep: schedule needs at least 3 points");
    }
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (i > 0 && !(eps[i] < eps[i - 1])) {
            throw std::invalid_argument("energy_sweep: schedule must be strictly decreasing");
        }
        if (eps[i] < 2.0 * u.domain().spacing * (1.0 - 1e-12)) {
            throw std::invalid_argument("energy_sweep: eps below two cell spacings");
        }
    }
}
}  // namespace detail

inline EnergyCurve directional_sweep(const GridFunction& u, const CellMask& region, Vec2 n, double q,
                                     const std::vector<double>& eps)
{
    detail::check_schedule(u, eps);
    EnergyCurve c;
    c.mode = EnergyMode::directional;
    c.label = "n=(" + std::to_string(n[0]) + "," + std::to_string(n[1]) + ")";
    c.q = q;
    c.eps = eps;
    for (double e : eps) {
        c.energy.push_back(directional_energy(u, region, n, q, e));
    }
    std::tie(c.limit, c.uncertainty) = richardson(c.eps, c.energy);
    return c;
}

inline EnergyCurve kernel_sweep(const GridFunction& u, const CellMask& region, const KernelFamily& kernel, double q,
                                const std::vector<double>& eps)
{
    detail::check_schedule(u, eps);
    EnergyCurve c;
    c.mode = EnergyMode::kernel;
    c.label = std::string(to_string(kernel.kind()));
    c.q = q;
    c.eps = eps;
    for (double e : eps) {
        const auto k = kernel_energy(u, region, kernel, q, e);
        c.energy.push_back(k.value);
        c.under_resolved = c.under_resolved || k.under_resolved;
    }
    std::tie(c.limit, c.uncertainty) = richardson(c.eps, c.energy);
    return c;
}

/// Average of directional limits over `count` directions equally spaced on
/// the half circle (|nu . n| is even in n, so this is the full sphere mean).
inline double directional_fan_limit(const GridFunction& u, const CellMask& region, double q,
                                    const std::vector<double>& eps, std::size_t count)
{
    if (u.domain().dim != 2 || count < 1) {
        throw std::invalid_argument("directional_fan_limit: 2D grids and at least one direction");
    }
    std::vector<double> limits;
    for (std::size_t i = 0; i < count; ++i) {
        const double th = std::numbers::pi * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
        limits.push_back(directional_sweep(u, region, {std::cos(th), std::sin(th)}, q, eps).limit);
    }
    return pairwise_sum(limits) / static_cast<double>(count);
}

// ---------------------------------------------------------------- shapes

/// Axis-aligned box [lo, hi] (second coordinates ignored in 1D).
struct RegionBox {
    Vec2 lo{};
    Vec2 hi{};

    [[nodiscard]] CellMask mask(const GridDomain& d) const { return CellMask::box(d, lo, hi); }
};

/// Synthetic piecewise-constant function with a known jump set.
struct JumpShape {
    enum class Kind { step1d, staircase1d, disk2d, square2d };
    Kind kind = Kind::step1d;
    std::vector<double> positions;  // 1D jump locations, increasing
    std::vector<double> jumps;      // 1D jump sizes u(x+) - u(x-)
    Vec2 center{};
    double size = 0.0;  // disk radius or square side
    double amplitude = 1.0;

    static JumpShape step1d(double a, double x0 = 0.0) { return {Kind::step1d, {x0}, {a}, {}, 0.0, a}; }

    static JumpShape staircase1d(std::vector<double> positions, std::vector<double> jumps)
    {
        if (positions.size() != jumps.size() || positions.empty() ||
            !std::is_sorted(positions.begin(), positions.end())) {
            throw std::invalid_argument("staircase1d: need matching, sorted positions and jumps");
        }
        return {Kind::staircase1d, std::move(positions), std::move(jumps), {}, 0.0, 1.0};
    }

    static JumpShape disk2d(double a, Vec2 center, double r) { return {Kind::disk2d, {}, {}, center, r, a}; }

    static JumpShape square2d(double a, Vec2 center, double side) { return {Kind::square2d, {}, {}, center, side, a}; }

    [[nodiscard]] int dim() const { return kind == Kind::step1d || kind == Kind::staircase1d ? 1 : 2; }

    [[nodiscard]] double operator()(Vec2 x) const
    {
        switch (kind) {
        case Kind::step1d:
        case Kind::staircase1d: {
            double v = 0.0;
            for (std::size_t i = 0; i < positions.size(); ++i) {
                if (x[0] > positions[i]) {
                    v += jumps[i];
                }
            }
            return v;
        }
        case Kind::disk2d:
            return std::hypot(x[0] - center[0], x[1] - center[1]) < size ? amplitude : 0.0;
        case Kind::square2d:
            return std::fabs(x[0] - center[0]) < size / 2 && std::fabs(x[1] - center[1]) < size / 2 ? amplitude : 0.0;
        }
        return 0.0;
    }

    /// Samples at cell centers.
    [[nodiscard]] GridFunction sample(const GridDomain& d) const
    {
        if (d.dim != dim()) {
            throw std::invalid_argument("JumpShape: dimension does not match grid");
        }
        return GridFunction::sample(d, [this](Vec2 x) { return (*this)(x); });
    }
};

struct JumpGroundTruth {
    double directional = 0.0;  // int_{B cap J} |u+ - u-|^q |nu . n|
    double isotropic = 0.0;    // int_{B cap J} |u+ - u-|^q
    double sphere_mean_abs_first = 1.0;

    /// Limit of the kernel energy: sphere mean times the isotropic integral.
    [[nodiscard]] double kernel_limit() const { return sphere_mean_abs_first * isotropic; }
};

namespace detail {
// Length of [a, b] inside [lo, hi].
inline double clip_length(double a, double b, double lo, double hi) { return std::max(0.0, std::min(b, hi) - std::max(a, lo)); }
}  // namespace detail

/// True iff the jump set meets the boundary of B in an H^{N-1}-null set.
inline bool boundary_condition_check(const RegionBox& b, const JumpShape& s)
{
    switch (s.kind) {
    case JumpShape::Kind::step1d:
    case JumpShape::Kind::staircase1d:
        // in 1D H^0 is counting measure: no jump may sit on an endpoint
        for (double x : s.positions) {
            if (x == b.lo[0] || x == b.hi[0]) {
                return false;
            }
        }
        return true;
    case JumpShape::Kind::disk2d:
        // a circle meets each boundary line in at most two points
        return true;
    case JumpShape::Kind::square2d: {
        const double h = s.size / 2;
        const double sx0 = s.center[0] - h, sx1 = s.center[0] + h;
        const double sy0 = s.center[1] - h, sy1 = s.center[1] + h;
        for (double ex : {sx0, sx1}) {  // vertical square edges
            for (double bx : {b.lo[0], b.hi[0]}) {
                if (ex == bx && detail::clip_length(sy0, sy1, b.lo[1], b.hi[1]) > 0.0) {
                    return false;
                }
            }
        }
        for (double ey : {sy0, sy1}) {  // horizontal square edges
            for (double by : {b.lo[1], b.hi[1]}) {
                if (ey == by && detail::clip_length(sx0, sx1, b.lo[0], b.hi[0]) > 0.0) {
                    return false;
                }
            }
        }
        return true;
    }
    }
    return false;
}

/// Closed-form jump integrals over B for unit direction n.
inline JumpGroundTruth ground_truth(const JumpShape& s, const RegionBox& b, double q, Vec2 n = {1.0, 0.0})
{
    if (!boundary_condition_check(b, s)) {
        throw std::invalid_argument("ground_truth: jump set meets the region boundary");
    }
    JumpGroundTruth g;
    g.sphere_mean_abs_first = sphere_mean_abs_first(s.dim());
    const double aq = std::pow(std::fabs(s.amplitude), q);
    switch (s.kind) {
    case JumpShape::Kind::step1d:
    case JumpShape::Kind::staircase1d:
        for (std::size_t i = 0; i < s.positions.size(); ++i) {
            if (s.positions[i] > b.lo[0] && s.positions[i] < b.hi[0]) {
                g.isotropic += std::pow(std::fabs(s.jumps[i]), q);
            }
        }
        g.directional = g.isotropic * std::fabs(n[0]);
        break;
    case JumpShape::Kind::disk2d: {
        const double r = s.size;
        const bool inside = s.center[0] - r >= b.lo[0] && s.center[0] + r <= b.hi[0] && s.center[1] - r >= b.lo[1] &&
                            s.center[1] + r <= b.hi[1];
        if (!inside) {
            throw std::invalid_argument("ground_truth: disk must lie inside the region");
        }
        // int over the circle of |nu . n| = 4 r |n|
        g.isotropic = aq * 2.0 * std::numbers::pi * r;
        g.directional = aq * 4.0 * r * std::hypot(n[0], n[1]);
        break;
    }
    case JumpShape::Kind::square2d: {
        const double h = s.size / 2;
        const double sx0 = s.center[0] - h, sx1 = s.center[0] + h;
        const double sy0 = s.center[1] - h, sy1 = s.center[1] + h;
        double vertical = 0.0, horizontal = 0.0;
        for (double ex : {sx0, sx1}) {
            if (ex > b.lo[0] && ex < b.hi[0]) {
                vertical += detail::clip_length(sy0, sy1, b.lo[1], b.hi[1]);
            }
        }
        for (double ey : {sy0, sy1}) {
            if (ey > b.lo[1] && ey < b.hi[1]) {
                horizontal += detail::clip_length(sx0, sx1, b.lo[0], b.hi[0]);
            }
        }
        g.isotropic = aq * (vertical + horizontal);
        g.directional = aq * (vertical * std::fabs(n[0]) + horizontal * std::fabs(n[1]));
        break;
    }
    }
    return g;
}

}  // namespace oscillab
