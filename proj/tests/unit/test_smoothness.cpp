#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "oscillab/fixtures.hpp"
#include "oscillab/measure.hpp"
#include "oscillab/smoothness.hpp"

using namespace oscillab;
using Catch::Approx;

namespace {
// ||Delta^k_h u||_p over all of R^N via the recursive difference on a padded grid
double padded_difference_norm(const GridFunction& u, Offset o, int k, double p)
{
    const auto pad_cells = difference_support_padding(o, k);
    const auto w = pad(u, pad_cells, pad_cells);
    return lebesgue_norm(k_difference(w, o, k), p);
}

// Double sum over every ordered pair of cells of the zero extension within the cutoff.
double brute_gagliardo(const GridFunction& u, double s, double q, double cutoff)
{
    const auto& d = u.domain();
    const auto reach = static_cast<std::size_t>(std::floor(cutoff / d.spacing));
    const auto w = pad(u, reach);
    const auto& wd = w.domain();
    const double vol = wd.cell_volume();
    double acc = 0.0;
    for (std::size_t i = 0; i < wd.size(); ++i) {
        const auto ci = wd.unflat(i);
        for (std::size_t j = 0; j < wd.size(); ++j) {
            if (i == j) {
                continue;
            }
            const auto cj = wd.unflat(j);
            const double r = wd.length({cj[0] - ci[0], cj[1] - ci[1]});
            if (r > cutoff * (1 + 1e-12)) {
                continue;
            }
            acc += std::pow(std::fabs(w[i] - w[j]), q) / std::pow(r, s * q + d.dim) * vol * vol;
        }
    }
    return std::pow(acc, 1.0 / q);
}
}  // namespace

TEST_CASE("difference norms agree with the recursive definition on a padded grid")
{
    for (int dim : {1, 2}) {
        const auto u = fixture(Generator::random_piecewise, dim, 20, 1.0, 5 + dim);
        for (int k : {1, 2, 3}) {
            for (Offset o : {Offset{1, 0}, Offset{3, 0}, Offset{-2, 0}, Offset{2, dim == 2 ? -1 : 0}}) {
                for (double p : {0.5, 1.0, 2.0}) {
                    CHECK(difference_norm(u, o, k, p) == Approx(padded_difference_norm(u, o, k, p)).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("inside-box differences only use pairs within the box")
{
    const auto u = fixture(Generator::step, 1, 64, 1.5);
    // one jump inside, the box edge excluded: ||Delta_h u||_1 = |a| |h| for h inside
    for (std::ptrdiff_t m : {1, 4, 16}) {
        const double len = u.domain().length({m, 0});
        CHECK(difference_norm(u, {m, 0}, 1, 1.0, DifferenceSupport::inside_box) == Approx(1.5 * len));
        CHECK(difference_norm(u, {m, 0}, 1, 1.0) == Approx(2.0 * 1.5 * len));
    }
}

TEST_CASE("lattice is symmetric and sorted by length")
{
    const auto lat = ShiftLattice::ball(2, 3.0);
    std::size_t brute = 0;
    for (int a = -3; a <= 3; ++a) {
        for (int b = -3; b <= 3; ++b) {
            brute += (a || b) && a * a + b * b <= 9 ? 1 : 0;
        }
    }
    CHECK(lat.size() == brute);
    const auto d = GridDomain::centered(2, 8, 1.0);
    for (std::size_t i = 1; i < lat.size(); ++i) {
        CHECK(d.length(lat.offsets()[i]) >= d.length(lat.offsets()[i - 1]));
    }
    CHECK_THROWS(ShiftLattice(1, {{0, 0}}));
    CHECK_THROWS(ShiftLattice(1, {{1, 1}}));
    CHECK(ShiftLattice::axes(2, 2).size() == 8);
}

TEST_CASE("higher-order modulus is dominated by the lower one")
{
    const auto lat = ShiftLattice::ball(1, 16.0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto u = fixture(Generator::random_piecewise, 1, 64, 1.0, seed);
        std::vector<double> ts{0.01, 0.05, 0.1, 0.3, 0.5};
        for (double p : {0.5, 1.0, 2.0}) {
            const double c = p >= 1.0 ? 2.0 : std::pow(2.0, 1.0 / p);
            for (int k : {1, 2}) {
                const auto a = modulus_of_continuity(u, k, p, lat, ts);
                const auto b = modulus_of_continuity(u, k + 1, p, lat, ts);
                for (std::size_t i = 0; i < ts.size(); ++i) {
                    CHECK(b.omega[i] <= c * a.omega[i] * (1 + 1e-12));
                }
            }
        }
    }
}

TEST_CASE("integral Besov norm matches numerical t-integration")
{
    const auto u = fixture(Generator::hoelder_bump, 1, 64);
    const auto lat = ShiftLattice::ball(1, 8.0);
    const auto norms = lattice_difference_norms(u, lat, 1, 2.0);
    auto omega = [&](double t) {
        double best = 0.0;
        for (std::size_t i = 0; i < lat.size(); ++i) {
            if (u.domain().length(lat.offsets()[i]) <= t) {
                best = std::max(best, norms[i]);
            }
        }
        return best;
    };
    for (double s : {0.3, 0.7}) {
        for (double q : {1.0, 2.0}) {
            // midpoint rule in log t over [t_min, 1e4] plus the exact frozen tail
            const double lo = std::log(u.domain().spacing * 0.999);
            const double hi = std::log(1e4);
            const int steps = 400000;
            double acc = 0.0;
            for (int i = 0; i < steps; ++i) {
                const double t = std::exp(lo + (hi - lo) * (i + 0.5) / steps);
                acc += std::pow(omega(t) / std::pow(t, s), q) * (hi - lo) / steps;
            }
            acc += std::pow(omega(1e4), q) * std::pow(1e4, -s * q) / (s * q);
            const auto r = besov_integral_norm(u, s, 2.0, q, lat);
            CHECK(r.value == Approx(std::pow(acc, 1.0 / q)).epsilon(1e-4));
            CHECK(r.k == 1);
        }
    }
    CHECK(besov_integral_norm(u, 1.5, 2.0, 1.0, lat).k == 2);
    CHECK_THROWS(besov_integral_norm(u, 1.5, 2.0, 1.0, lat, DifferenceSupport::whole_space, 1));
}

TEST_CASE("sup Besov norm of a step")
{
    // ||Delta_h u||_p = (2 |a|^p |h|)^{1/p} over R: the sup of |h|^{1/p - s} sits at the largest shift
    const auto u = fixture(Generator::step, 1, 128, 2.0);
    const auto lat = ShiftLattice::ball(1, 32.0);
    const double hmax = u.domain().length({32, 0});
    for (double p : {1.0, 2.0}) {
        const double s = 0.5 / p;
        CHECK(besov_sup_norm(u, s, p, lat).value == Approx(std::pow(2.0 * std::pow(2.0, p) * hmax, 1.0 / p) / std::pow(hmax, s)));
    }
}

TEST_CASE("Gagliardo seminorm matches the brute-force double sum")
{
    for (int dim : {1, 2}) {
        const std::size_t n = dim == 1 ? 24 : 8;
        const auto u = fixture(Generator::random_piecewise, dim, n, 1.0, 40 + dim);
        for (double s : {0.3, 0.8}) {
            for (double q : {1.0, 2.0}) {
                const double cutoff = dim == 1 ? 3.0 : 0.9;
                CHECK(gagliardo_seminorm(u, s, q, cutoff).value == Approx(brute_gagliardo(u, s, q, cutoff)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("Gagliardo tail bound covers pairs beyond the cutoff")
{
    const auto u = fixture(Generator::random_piecewise, 1, 32, 1.0, 3);
    const double s = 0.4;
    const double q = 2.0;
    const auto near = gagliardo_seminorm(u, s, q, 4.0);
    const auto far = gagliardo_seminorm(u, s, q, 64.0);
    CHECK(std::pow(far.value, q) - std::pow(near.value, q) <= near.tail_bound);
    CHECK(far.value >= near.value);
}

TEST_CASE("a jump is not in W^{s,q} when sq > 1")
{
    // the discrete seminorm of a step grows like h^{(1 - sq)/q}
    const double s = 0.9;
    const double q = 8.0;
    const double coarse = gagliardo_seminorm(fixture(Generator::step, 1, 256), s, q, 4.0).value;
    const double fine = gagliardo_seminorm(fixture(Generator::step, 1, 1024), s, q, 4.0).value;
    CHECK(fine > 2.0 * coarse);
    // with sq < 1 it converges
    const double c2 = gagliardo_seminorm(fixture(Generator::step, 1, 256), 0.2, 2.0, 4.0).value;
    const double f2 = gagliardo_seminorm(fixture(Generator::step, 1, 1024), 0.2, 2.0, 4.0).value;
    CHECK(f2 == Approx(c2).epsilon(0.05));
}

TEST_CASE("weak Gagliardo seminorm is dominated by the strong one")
{
    const auto u = fixture(Generator::random_piecewise, 1, 48, 1.0, 12);
    for (double s : {0.2, 0.6}) {
        for (double q : {1.0, 2.0, 3.0}) {
            CHECK(gagliardo_weak_seminorm(u, s, q, 2.0) <= gagliardo_seminorm(u, s, q, 2.0).value * (1 + 1e-12));
        }
    }
}

TEST_CASE("variation of a step and perimeter of a disk")
{
    const auto u = fixture(Generator::step, 1, 128, 1.5);
    const auto lat = ShiftLattice::ball(1, 16.0);
    CHECK(bv_variation(u, lat, DifferenceSupport::inside_box).value == Approx(1.5));
    CHECK(bv_variation(u, lat).value == Approx(3.0));  // the box edge is a second jump
    CHECK(bv_variation_weak(u, lat).value <= bv_variation(u, lat).value * (1 + 1e-12));
    const auto disk = fixture(Generator::disk_indicator, 2, 256);
    const double per = bv_perimeter_estimate(disk, ShiftLattice::ball(2, 4.0));
    CHECK(per == Approx(2.0 * std::numbers::pi * 0.6).epsilon(0.05));
}

TEST_CASE("difference quotients recover the gradient")
{
    const auto u = fixture(Generator::gaussian_bump, 1, 1024);
    const auto r = sobolev_difference_check(u, 2.0, ShiftLattice::ball(1, 32.0));
    CHECK(r.pass);
    CHECK(r.extra["lower_ok"].get<bool>());
    const auto u2 = fixture(Generator::gaussian_bump, 2, 128);
    CHECK(sobolev_difference_check(u2, 2.0, ShiftLattice::ball(2, 6.0)).pass);
    CHECK_THROWS(sobolev_difference_check(u, 1.0, ShiftLattice::ball(1, 2.0)));
}

TEST_CASE("Marchaud ratio stays bounded on bumps")
{
    const auto lat = ShiftLattice::ball(1, 128.0);
    std::vector<double> ts;
    for (int i = 0; i < 8; ++i) {
        ts.push_back(0.004 * std::pow(2.0, i));
    }
    for (auto g : {Generator::gaussian_bump, Generator::hoelder_bump}) {
        const auto r = marchaud_probe(fixture(g, 1, 512), 1.0, 1, 2, 1.0, ts, lat);
        CHECK(r.pass);
        CHECK(r.ratio < 10.0);
    }
    CHECK_THROWS(marchaud_probe(fixture(Generator::gaussian_bump, 1, 64), 1.0, 2, 2, 1.0, ts, lat));
}
