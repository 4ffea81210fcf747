#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oscillab/fixtures.hpp"
#include "oscillab/measure.hpp"

using namespace oscillab;
using Catch::Approx;

namespace {
// measure{|u|^q > t} by counting cells
double brute_lambda(const GridFunction& u, double q, double t)
{
    double m = 0.0;
    for (double v : u.values()) {
        if (std::pow(std::fabs(v), q) > t) {
            m += u.domain().cell_volume();
        }
    }
    return m;
}

// (q int_0^inf s^{g-1} lambda(s^q)^{g/q} ds)^{1/g} by the midpoint rule on [0, max|u|]
double lorentz_oracle(const GridFunction& u, double q, double g, int steps = 200000)
{
    const double top = u.max_abs();
    const double ds = top / steps;
    std::vector<double> vals(u.values().begin(), u.values().end());
    for (double& v : vals) {
        v = std::fabs(v);
    }
    std::sort(vals.begin(), vals.end());
    double acc = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double s = (i + 0.5) * ds;
        const auto above = static_cast<double>(vals.end() - std::upper_bound(vals.begin(), vals.end(), s));
        acc += std::pow(s, g - 1.0) * std::pow(above * u.domain().cell_volume(), g / q) * ds;
    }
    return std::pow(q * acc, 1.0 / g);
}

GridFunction levels(std::vector<double> v)
{
    const auto d = GridDomain::line(0.0, v.size(), 0.5);
    return {d, std::move(v)};
}
}  // namespace

TEST_CASE("distribution curve matches cell counting")
{
    const auto u = fixture(Generator::random_piecewise, 1, 128, 2.0, 9);
    for (double q : {0.5, 1.0, 3.0}) {
        const auto c = distribution(u, q);
        for (double t : {0.0, 0.01, 0.3, 1.0, 2.5, 7.9, 100.0}) {
            CHECK(c(t) == Approx(brute_lambda(u, q, t)));
        }
        // right-continuity at a breakpoint: lambda(t_i) excludes level t_i
        for (std::size_t i = 0; i < c.breakpoints().size(); ++i) {
            CHECK(c(c.breakpoints()[i]) == Approx(brute_lambda(u, q, c.breakpoints()[i])));
        }
    }
}

TEST_CASE("Lorentz norm of an indicator has the closed form")
{
    // chi_A with |A| = 1.5: ||chi_A||_{L^{q,g}} = (q/g)^{1/g} |A|^{1/q}
    const auto u = levels({1, 1, 0, 1, 0, 0});
    for (double q : {0.5, 1.0, 2.0, 4.0}) {
        for (double g : {0.5, 1.0, 2.0, 4.0}) {
            CHECK(lorentz_norm(distribution(u, q), g) == Approx(std::pow(q / g, 1.0 / g) * std::pow(1.5, 1.0 / q)));
        }
        CHECK(lorentz_norm(distribution(u, q), infinity) == Approx(std::pow(1.5, 1.0 / q)));
    }
}

TEST_CASE("Lorentz norm matches numerical integration of the definition")
{
    const auto u = fixture(Generator::random_piecewise, 1, 64, 1.0, 4);
    for (double q : {1.0, 2.0, 3.0}) {
        for (double g : {1.0, 2.0, 4.0}) {
            CHECK(lorentz_norm(distribution(u, q), g) == Approx(lorentz_oracle(u, q, g)).epsilon(1e-4));
        }
    }
}

TEST_CASE("L^{q,q} is L^q")
{
    const auto u = fixture(Generator::random_piecewise, 2, 32, 1.0, 5);
    for (double q : {0.5, 1.0, 2.0, 5.0}) {
        CHECK(lorentz_norm(distribution(u, q), q) == Approx(lebesgue_norm(u, q)).epsilon(1e-12));
    }
}

TEST_CASE("weak norm by brute force")
{
    const auto u = fixture(Generator::random_piecewise, 1, 200, 3.0, 13);
    for (double q : {0.5, 1.0, 2.0}) {
        // the sup of t lambda(t) is approached as t rises to |v|^q for some cell value v
        double best = 0.0;
        for (double v : u.values()) {
            const double a = std::fabs(v);
            double mass = 0.0;
            for (double w : u.values()) {
                mass += std::fabs(w) >= a ? u.domain().cell_volume() : 0.0;
            }
            best = std::max(best, std::pow(a, q) * mass);
        }
        CHECK(weak_norm(u, q) == Approx(std::pow(best, 1.0 / q)));
        CHECK(weak_norm(u, q) <= lebesgue_norm(u, q) * (1 + 1e-12));
    }
}

TEST_CASE("truncated sup by dense sampling")
{
    const auto u = levels({0.2, 0.5, 0.5, 1.0, 2.0, -3.0});
    const auto c = distribution(u, 1.0);
    for (double upper : {0.1, 0.5, 0.7, 2.0, 10.0}) {
        double best = 0.0;
        for (int i = 1; i <= 100000; ++i) {
            const double s = upper * i / 100000.0;
            best = std::max(best, s * brute_lambda(u, 1.0, s));
        }
        // sampling approaches the left limits from below
        CHECK(truncated_sup(c, upper) >= best);
        CHECK(truncated_sup(c, upper) == Approx(best).epsilon(1e-4));
    }
    CHECK_THROWS(truncated_sup(c, 0.0));
}

TEST_CASE("power identity")
{
    const auto u = fixture(Generator::random_piecewise, 2, 24, 1.7, 21);
    for (auto [r, p, q] : {std::tuple{2.0, 1.0, 1.0}, std::tuple{0.5, 2.0, infinity}, std::tuple{3.0, 0.7, 1.5}}) {
        CHECK(power_identity_check(u, r, p, q).pass);
    }
}

TEST_CASE("weighted samples")
{
    WeightedSampleSet s;
    s.add(2.0, 0.5);
    s.add(-1.0, 2.0);
    s.add(0.0, 1.0);
    // t lambda(t) for q = 1: just below 1 -> 1 * 2.5, just below 2 -> 2 * 0.5
    CHECK(weighted_weak_norm(s, 1.0) == Approx(2.5));
    CHECK(weighted_weak_norm(s, 2.0) == Approx(std::max(1.0 * 2.5, 4.0 * 0.5)));
    CHECK_THROWS(s.add(1.0, 0.0));
    CHECK_THROWS(weighted_weak_norm(WeightedSampleSet{}, 1.0));
}

TEST_CASE("region masks restrict the measure")
{
    const auto u = levels({1, 2, 3, 4});
    std::vector<std::uint8_t> bits{0, 1, 1, 0};
    const CellMask m(u.domain(), bits);
    CHECK(lebesgue_norm(u, 1.0, &m) == Approx(2.5));
    const CellMask empty(u.domain(), {0, 0, 0, 0});
    CHECK_THROWS(lebesgue_norm(u, 1.0, &empty));
}

TEST_CASE("invalid exponents are rejected")
{
    const auto u = levels({1, 2});
    CHECK_THROWS(lebesgue_norm(u, 0.0));
    CHECK_THROWS(lorentz_norm(distribution(u, 1.0), -1.0));
    CHECK_THROWS(distribution(u, 0.0));
}
