#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oscillab/fixtures.hpp"
#include "oscillab/oscillation.hpp"

using namespace oscillab;
using Catch::Approx;

namespace {
std::vector<double> cells_of(const GridFunction& u, const CellBlock& b)
{
    std::vector<double> v;
    for (std::size_t i = 0; i < b.extent[0]; ++i) {
        for (std::size_t j = 0; j < b.extent[1]; ++j) {
            v.push_back(u.at({b.lo[0] + static_cast<std::ptrdiff_t>(i), b.lo[1] + static_cast<std::ptrdiff_t>(j)}));
        }
    }
    return v;
}

double brute_mean_osc(const std::vector<double>& v)
{
    double mean = 0.0;
    for (double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) {
        s += std::fabs(x - mean);
    }
    return s / static_cast<double>(v.size());
}

double brute_double_avg(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) {
        for (double y : v) {
            s += std::fabs(x - y);
        }
    }
    return s / static_cast<double>(v.size() * v.size());
}
}  // namespace

TEST_CASE("cube oscillations match O(m^2) oracles")
{
    std::mt19937_64 rng(17);
    for (int dim : {1, 2}) {
        const auto u = fixture(Generator::random_piecewise, dim, 24, 1.0, 3 + dim);
        for (int t = 0; t < 60; ++t) {
            const std::size_t m = 1 + detail::below(rng, 24);
            const auto i = static_cast<std::ptrdiff_t>(detail::below(rng, 25 - m));
            const auto j = dim == 2 ? static_cast<std::ptrdiff_t>(detail::below(rng, 25 - m)) : 0;
            const auto b = CellBlock::cube(u.domain(), {i, j}, m);
            const auto v = cells_of(u, b);
            CHECK(mean_oscillation(u, b) == Approx(brute_mean_osc(v)).margin(1e-13));
            CHECK(double_average_oscillation(u, b) == Approx(brute_double_avg(v)).margin(1e-13));
        }
    }
}

TEST_CASE("step function has BMO seminorm |a|/2 in both forms")
{
    const auto u = fixture(Generator::step, 1, 64, 3.0);
    const auto cfg = CubeSweepConfig::exhaustive(CubeSweepConfig::all_sizes(u.domain()));
    CHECK(bmo_seminorm(u, cfg, OscillationForm::double_avg).seminorm == Approx(1.5));
    CHECK(bmo_seminorm(u, cfg, OscillationForm::mean_osc).seminorm == Approx(1.5));
    // the maximizing cube straddles the jump symmetrically
    const auto r = bmo_seminorm(u, cfg);
    CHECK(r.argmax_cube.lo[0] + static_cast<std::ptrdiff_t>(r.argmax_cube.extent[0] / 2) == 32);
}

TEST_CASE("BMO seminorm: constants, scaling, truncation")
{
    const auto u = fixture(Generator::random_piecewise, 2, 32, 1.0, 8);
    const auto cfg = CubeSweepConfig::strided(CubeSweepConfig::dyadic_sizes(u.domain()), 2);
    const double b = bmo_seminorm(u, cfg).seminorm;
    CHECK(bmo_seminorm(u.shifted_by_constant(5.0), cfg).seminorm == Approx(b).epsilon(1e-12));
    CHECK(bmo_seminorm(u.scaled(-2.5), cfg).seminorm == Approx(2.5 * b).epsilon(1e-12));
    CHECK(bmo_seminorm(truncate(u, 0.3), cfg).seminorm <= b * (1 + 1e-12));
    const GridFunction c(u.domain(), std::vector<double>(u.size(), 7.0));
    CHECK(bmo_seminorm(c, cfg).seminorm == 0.0);
}

TEST_CASE("sweep enumeration")
{
    const auto d = GridDomain::line(0.0, 16, 1.0);
    const auto cubes = sweep_cubes(d, CubeSweepConfig::exhaustive(CubeSweepConfig::dyadic_sizes(d)));
    CHECK(cubes.size() == 16 + 15 + 13 + 9 + 1);
    const auto d2 = GridDomain::centered(2, 8, 1.0);
    CHECK(sweep_cubes(d2, CubeSweepConfig::strided({4}, 2)).size() == 9);
    CHECK_THROWS(sweep_cubes(d, CubeSweepConfig::exhaustive({17})));
    CHECK_THROWS(sweep_cubes(d, CubeSweepConfig::exhaustive({})));
    CHECK(CubeSweepConfig::dyadic_sizes(GridDomain::line(0.0, 12, 1.0)) == std::vector<std::size_t>{1, 2, 4, 8, 12});
}

TEST_CASE("exhaustive sweep finds the brute-force supremum")
{
    const auto u = fixture(Generator::random_piecewise, 1, 40, 1.0, 31);
    double best = 0.0;
    for (std::size_t m = 1; m <= 40; ++m) {
        for (std::size_t i = 0; i + m <= 40; ++i) {
            best = std::max(best, brute_double_avg(cells_of(u, CellBlock::cube(u.domain(), {static_cast<std::ptrdiff_t>(i), 0}, m))));
        }
    }
    CHECK(bmo_seminorm(u, CubeSweepConfig::exhaustive(CubeSweepConfig::all_sizes(u.domain()))).seminorm ==
          Approx(best).margin(1e-13));
}

TEST_CASE("VMO modulus is nondecreasing and small at small radii for a smooth bump")
{
    const auto u = fixture(Generator::gaussian_bump, 1, 256);
    const auto cfg = CubeSweepConfig::exhaustive(CubeSweepConfig::dyadic_sizes(u.domain()));
    const auto pts = vmo_modulus(u, cfg, {0.005, 0.02, 0.05, 0.2, 1.0, 2.0});
    for (std::size_t i = 1; i < pts.size(); ++i) {
        CHECK(pts[i].value >= pts[i - 1].value);
    }
    CHECK(pts.front().unresolved);
    CHECK(pts[1].value < 0.1 * pts.back().value);
    const auto step = fixture(Generator::step, 1, 256);
    // a jump keeps the small-scale oscillation at |a|/2
    CHECK(vmo_modulus(step, cfg, {0.02})[0].value == Approx(0.5));
}

TEST_CASE("John-Nirenberg probe on a logarithm")
{
    const auto u = fixture(Generator::log_singular, 1, 1024);
    std::vector<double> sig;
    for (int i = 1; i <= 60; ++i) {
        sig.push_back(0.1 * i);
    }
    const auto jn = jn_decay_probe(u, CellBlock::cube(u.domain(), {0, 0}, 1024), sig);
    CHECK(jn.slope < 0.0);
    CHECK(jn.r_squared >= 0.95);
    CHECK(jn.tail_threshold == Approx(2.0 * jn.bmo));
    // measures are nonincreasing in sigma
    for (std::size_t i = 1; i < jn.measure.size(); ++i) {
        CHECK(jn.measure[i] <= jn.measure[i - 1]);
    }
    CHECK_THROWS(jn_decay_probe(u, CellBlock::cube(u.domain(), {0, 0}, 1024), {0.5, 0.2}));
}

TEST_CASE("form names round-trip")
{
    CHECK(oscillation_form_from_string("mean_osc") == OscillationForm::mean_osc);
    CHECK(oscillation_form_from_string(to_string(OscillationForm::double_avg)) == OscillationForm::double_avg);
    CHECK_THROWS(oscillation_form_from_string("median"));
}
