#pragma once

// Deterministic test functions on centered boxes [-L, L]^N.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "grid.hpp"

namespace oscillab {

enum class Generator {
    step,
    multi_step,
    log_singular,
    hoelder_bump,
    gaussian_bump,
    disk_indicator,
    square_indicator,
    random_piecewise,
    constant
};

inline constexpr std::array<Generator, 9> all_generators{
    Generator::step,           Generator::multi_step,       Generator::log_singular,
    Generator::hoelder_bump,   Generator::gaussian_bump,    Generator::disk_indicator,
    Generator::square_indicator, Generator::random_piecewise, Generator::constant};

inline std::string_view to_string(Generator g)
{
    switch (g) {
    case Generator::step: return "step";
    case Generator::multi_step: return "multi_step";
    case Generator::log_singular: return "log_singular";
    case Generator::hoelder_bump: return "hoelder_bump";
    case Generator::gaussian_bump: return "gaussian_bump";
    case Generator::disk_indicator: return "disk_indicator";
    case Generator::square_indicator: return "square_indicator";
    case Generator::random_piecewise: return "random_piecewise";
    case Generator::constant: return "constant";
    }
    return "?";
}

inline Generator generator_from_string(std::string_view s)
{
    for (auto g : all_generators) {
        if (to_string(g) == s) {
            return g;
        }
    }
    throw std::invalid_argument("unknown fixture generator: " + std::string(s));
}

struct FixtureSpec {
    Generator generator = Generator::step;
    int dim = 1;
    std::size_t cells = 256;  // per axis
    double half_width = 1.0;  // box is [-L, L]^dim
    double amplitude = 1.0;
    std::uint64_t seed = 0;
    std::size_t pieces = 8;  // random_piecewise only
};

struct Fixture {
    FixtureSpec spec;
    GridFunction u;
    std::string note;  // e.g. automatic origin offset
};

namespace detail {
// Uniform double in [0, 1) from the top 53 bits; identical on every platform,
// unlike std::uniform_real_distribution.
inline double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::size_t below(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(unit_double(rng) * static_cast<double>(n)); }

inline double norm2(std::array<double, 2> x, int dim) { return dim == 1 ? std::fabs(x[0]) : std::hypot(x[0], x[1]); }

inline GridFunction random_piecewise(const GridDomain& d, double a, std::uint64_t seed, std::size_t pieces)
{
    std::mt19937_64 rng(seed);
    const bool quantize = unit_double(rng) < 0.5;  // ties exercise breakpoint merging
    auto draw = [&] {
        double v = 2.0 * unit_double(rng) - 1.0;
        if (quantize) {
            v = std::round(v * 8.0) / 8.0;
        }
        return a * v;
    };
    // random cuts per axis, then one value per block
    auto cuts = [&](std::size_t n) {
        std::vector<std::size_t> c{0};
        const std::size_t k = std::max<std::size_t>(1, std::min(pieces, n));
        for (std::size_t i = 1; i < k; ++i) {
            c.push_back(below(rng, n));
        }
        c.push_back(n);
        std::sort(c.begin(), c.end());
        return c;
    };
    const auto c0 = cuts(d.cells[0]);
    const auto c1 = d.dim == 2 ? cuts(d.cells[1]) : std::vector<std::size_t>{0, 1};
    std::vector<double> block((c0.size() - 1) * (c1.size() - 1));
    for (double& v : block) {
        v = draw();
    }
    std::vector<double> vals(d.size());
    std::size_t bi = 0;
    for (std::size_t i = 0; i < d.cells[0]; ++i) {
        while (i >= c0[bi + 1]) {
            ++bi;
        }
        std::size_t bj = 0;
        for (std::size_t j = 0; j < d.cells[1]; ++j) {
            while (j >= c1[bj + 1]) {
                ++bj;
            }
            vals[i * d.cells[1] + j] = block[bi * (c1.size() - 1) + bj];
        }
    }
    return {d, std::move(vals)};
}
}  // namespace detail

/// Builds the fixture; deterministic in its FixtureSpec.
inline Fixture generate_fixture(const FixtureSpec& s)
{
    if (s.cells < 2) {
        throw std::invalid_argument("fixture: need at least 2 cells per axis");
    }
    GridDomain d = GridDomain::centered(s.dim, s.cells, s.half_width);
    std::string note;
    const double L = s.half_width;
    const double a = s.amplitude;
    const int dim = s.dim;
    auto sample = [&](auto f) { return GridFunction::sample(d, f); };
    switch (s.generator) {
    case Generator::step:
        return {s, sample([&](std::array<double, 2> x) { return x[0] > 0.0 ? a : 0.0; }), note};
    case Generator::multi_step:
        // staircase 0 -> a -> -a: jumps a at -0.3L and -2a at 0.3L
        return {s,
                sample([&](std::array<double, 2> x) {
                    return (x[0] > -0.3 * L ? a : 0.0) + (x[0] > 0.3 * L ? -2.0 * a : 0.0);
                }),
                note};
    case Generator::log_singular: {
        if (s.cells % 2 == 1) {
            // a cell would be centered on the singularity
            d = GridDomain(dim, {d.origin[0] + d.spacing / 2, dim == 2 ? d.origin[1] + d.spacing / 2 : 0.0}, d.cells,
                           d.spacing);
            note = "origin shifted by half a cell to avoid sampling log at 0";
        }
        return {s, sample([&](std::array<double, 2> x) { return a * std::log(detail::norm2(x, dim) / L); }), note};
    }
    case Generator::hoelder_bump:
        return {s,
                sample([&](std::array<double, 2> x) {
                    const double r = detail::norm2(x, dim) / L;
                    return r < 1.0 ? a * std::sqrt(r) * (1.0 - r * r) * (1.0 - r * r) : 0.0;
                }),
                note};
    case Generator::gaussian_bump:
        return {s,
                sample([&](std::array<double, 2> x) {
                    const double r = detail::norm2(x, dim) / (0.15 * L);
                    return a * std::exp(-0.5 * r * r);
                }),
                note};
    case Generator::disk_indicator:
        return {s, sample([&](std::array<double, 2> x) { return detail::norm2(x, dim) < 0.6 * L ? a : 0.0; }), note};
    case Generator::square_indicator:
        return {s,
                sample([&](std::array<double, 2> x) {
                    return std::fabs(x[0]) < 0.5 * L && (dim == 1 || std::fabs(x[1]) < 0.5 * L) ? a : 0.0;
                }),
                note};
    case Generator::random_piecewise:
        return {s, detail::random_piecewise(d, a, s.seed, s.pieces), note};
    case Generator::constant:
        return {s, sample([&](std::array<double, 2>) { return a; }), note};
    }
    throw std::invalid_argument("fixture: unknown generator");
}

inline GridFunction fixture(Generator g, int dim, std::size_t cells, double amplitude = 1.0, std::uint64_t seed = 0)
{
    FixtureSpec s;
    s.generator = g;
    s.dim = dim;
    s.cells = cells;
    s.amplitude = amplitude;
    s.seed = seed;
    return generate_fixture(s).u;
}

}  // namespace oscillab
