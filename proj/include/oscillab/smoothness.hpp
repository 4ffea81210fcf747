#pragma once

// Moduli of continuity, Besov (sup and integral forms), Gagliardo
// fractional-Sobolev seminorms, difference-quotient BV, and a Marchaud probe.
//
// Shifts range over a finite ShiftLattice of integer cell offsets. Since the
// lattice modulus t -> Omega_k(t) only changes at lattice lengths, every
// t-integral below is a finite sum over those lengths, evaluated exactly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "grid.hpp"
#include "kernel.hpp"
#include "measure.hpp"
#include "parallel.hpp"
#include "report.hpp"

namespace oscillab {

/// Where k-th differences are integrated.
///   whole_space: over all of R^N, using the zero extension outside the box.
///   inside_box:  only over x with x and x + k h both in the box; the jump
///                of the zero extension at the box edge is then invisible.
enum class DifferenceSupport { whole_space, inside_box };

inline std::string_view to_string(DifferenceSupport s) { return s == DifferenceSupport::whole_space ? "whole_space" : "inside_box"; }

/// Finite set of nonzero integer offsets, closed under negation, ordered by
/// length and then lexicographically.
class ShiftLattice {
public:
    ShiftLattice() = default;

    ShiftLattice(int dim, std::vector<Offset> offsets) : dim_(dim)
    {
        if (dim != 1 && dim != 2) {
            throw std::invalid_argument("ShiftLattice: dim must be 1 or 2");
        }
        const std::size_t n = offsets.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto o = offsets[i];
            if (o[0] == 0 && o[1] == 0) {
                throw std::invalid_argument("ShiftLattice: zero offset");
            }
            if (dim == 1 && o[1] != 0) {
                throw std::invalid_argument("ShiftLattice: 2D offset in a 1D lattice");
            }
            offsets.push_back({-o[0], -o[1]});
        }
        std::sort(offsets.begin(), offsets.end(), [](const Offset& a, const Offset& b) {
            const auto la = a[0] * a[0] + a[1] * a[1];
            const auto lb = b[0] * b[0] + b[1] * b[1];
            return la != lb ? la < lb : a < b;
        });
        offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
        offsets_ = std::move(offsets);
        if (offsets_.empty()) {
            throw std::invalid_argument("ShiftLattice: no offsets");
        }
    }

    /// Every nonzero offset of Euclidean length <= radius cells.
    static ShiftLattice ball(int dim, double radius)
    {
        if (!(radius >= 1.0)) {
            throw std::invalid_argument("ShiftLattice::ball: radius must be >= 1 cell");
        }
        const auto r = static_cast<std::ptrdiff_t>(std::floor(radius));
        const std::ptrdiff_t r1 = dim == 2 ? r : 0;
        std::vector<Offset> o;
        for (std::ptrdiff_t a = 0; a <= r; ++a) {
            for (std::ptrdiff_t b = -r1; b <= r1; ++b) {
                if ((a == 0 && b <= 0) || static_cast<double>(a * a + b * b) > radius * radius) {
                    continue;
                }
                o.push_back({a, b});
            }
        }
        return {dim, std::move(o)};
    }

    /// Multiples 1..radius of every axis direction.
    static ShiftLattice axes(int dim, std::ptrdiff_t radius)
    {
        if (radius < 1) {
            throw std::invalid_argument("ShiftLattice::axes: radius must be >= 1");
        }
        std::vector<Offset> o;
        for (std::ptrdiff_t m = 1; m <= radius; ++m) {
            o.push_back({m, 0});
            if (dim == 2) {
                o.push_back({0, m});
            }
        }
        return {dim, std::move(o)};
    }

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] const std::vector<Offset>& offsets() const { return offsets_; }
    [[nodiscard]] std::size_t size() const { return offsets_.size(); }

    void check(const GridDomain& d) const
    {
        if (d.dim != dim_) {
            throw std::invalid_argument("ShiftLattice: dimension does not match grid");
        }
    }

private:
    int dim_ = 1;
    std::vector<Offset> offsets_;
};

namespace detail {
inline double powabs(double v, double p)
{
    const double a = std::fabs(v);
    if (p == 1.0) {
        return a;
    }
    if (p == 2.0) {
        return a * a;
    }
    return std::pow(a, p);
}

inline std::vector<double> binomial_signs(int k)
{
    // c_j = C(k, j) (-1)^{k-j}
    std::vector<double> c(static_cast<std::size_t>(k) + 1);
    double b = 1.0;
    for (int j = 0; j <= k; ++j) {
        c[static_cast<std::size_t>(j)] = ((k - j) % 2 == 0 ? b : -b);
        b = b * static_cast<double>(k - j) / static_cast<double>(j + 1);
    }
    return c;
}
}  // namespace detail

/// Values of Delta^k_h u at every cell x where it may be nonzero (whole_space)
/// or where x and x + k h lie in the box (inside_box). Row-major over that range.
inline std::vector<double> difference_values(const GridFunction& u, Offset o, int k,
                                             DifferenceSupport support = DifferenceSupport::whole_space)
{
    if (k < 1) {
        throw std::invalid_argument("difference_values: k must be >= 1");
    }
    const auto& d = u.domain();
    if (d.dim == 1 && o[1] != 0) {
        throw std::invalid_argument("difference_values: 2D offset on a 1D grid");
    }
    std::array<std::ptrdiff_t, 2> lo{}, hi{};
    for (int a = 0; a < 2; ++a) {
        const auto n = static_cast<std::ptrdiff_t>(d.cells[static_cast<std::size_t>(a)]);
        const std::ptrdiff_t reach = -static_cast<std::ptrdiff_t>(k) * o[static_cast<std::size_t>(a)];
        if (support == DifferenceSupport::whole_space) {
            lo[static_cast<std::size_t>(a)] = std::min<std::ptrdiff_t>(0, reach);
            hi[static_cast<std::size_t>(a)] = n - 1 + std::max<std::ptrdiff_t>(0, reach);
        } else {
            lo[static_cast<std::size_t>(a)] = std::max<std::ptrdiff_t>(0, reach);
            hi[static_cast<std::size_t>(a)] = n - 1 + std::min<std::ptrdiff_t>(0, reach);
        }
    }
    std::vector<double> out;
    if (lo[0] > hi[0] || lo[1] > hi[1]) {
        return out;
    }
    const auto c = detail::binomial_signs(k);
    out.reserve(static_cast<std::size_t>((hi[0] - lo[0] + 1) * (hi[1] - lo[1] + 1)));
    for (std::ptrdiff_t i = lo[0]; i <= hi[0]; ++i) {
        for (std::ptrdiff_t j = lo[1]; j <= hi[1]; ++j) {
            double s = 0.0;
            for (int m = 0; m <= k; ++m) {
                s += c[static_cast<std::size_t>(m)] * u.at({i + m * o[0], j + m * o[1]});
            }
            out.push_back(s);
        }
    }
    return out;
}

/// sum |Delta^k_h u|^p * cell volume (the p-th power of the L^p norm).
inline double difference_power_sum(const GridFunction& u, Offset o, int k, double p,
                                   DifferenceSupport support = DifferenceSupport::whole_space)
{
    auto v = difference_values(u, o, k, support);
    for (double& x : v) {
        x = detail::powabs(x, p);
    }
    return pairwise_sum(v) * u.domain().cell_volume();
}

/// ||Delta^k_h u||_{L^p}.
inline double difference_norm(const GridFunction& u, Offset o, int k, double p,
                              DifferenceSupport support = DifferenceSupport::whole_space)
{
    if (!(p > 0.0)) {
        throw std::invalid_argument("difference_norm: p must be positive");
    }
    return std::pow(difference_power_sum(u, o, k, p, support), 1.0 / p);
}

/// [Delta^k_h u]_{L^q_w}.
inline double difference_weak_norm(const GridFunction& u, Offset o, int k, double q,
                                   DifferenceSupport support = DifferenceSupport::whole_space)
{
    if (!(q > 0.0)) {
        throw std::invalid_argument("difference_weak_norm: q must be positive");
    }
    const auto v = difference_values(u, o, k, support);
    const double vol = u.domain().cell_volume();
    std::vector<std::pair<double, double>> s;
    s.reserve(v.size());
    for (double x : v) {
        s.emplace_back(std::fabs(x), vol);
    }
    return lorentz_norm(DistributionCurve(std::move(s), q), infinity);
}

/// Per-offset ||Delta^k_h u||_{L^p} (or weak L^p) over the lattice, in lattice order.
inline std::vector<double> lattice_difference_norms(const GridFunction& u, const ShiftLattice& lattice, int k, double p,
                                                    DifferenceSupport support = DifferenceSupport::whole_space,
                                                    bool weak = false)
{
    lattice.check(u.domain());
    const auto& offs = lattice.offsets();
    return parallel_map<double>(offs.size(), [&](std::size_t i) {
        return weak ? difference_weak_norm(u, offs[i], k, p, support) : difference_norm(u, offs[i], k, p, support);
    });
}

/// The lattice modulus as a step function: omega[i] holds on [lengths[i], lengths[i+1]).
struct StepModulus {
    std::vector<double> lengths;  // distinct physical shift lengths, increasing
    std::vector<double> omega;    // running max of the norms up to each length
};

inline StepModulus step_modulus(const GridDomain& d, const ShiftLattice& lattice, const std::vector<double>& norms)
{
    StepModulus m;
    const auto& offs = lattice.offsets();
    double running = 0.0;
    for (std::size_t i = 0; i < offs.size(); ++i) {
        const double len = d.length(offs[i]);
        running = std::max(running, norms[i]);
        if (!m.lengths.empty() && len == m.lengths.back()) {
            m.omega.back() = running;
        } else {
            m.lengths.push_back(len);
            m.omega.push_back(running);
        }
    }
    return m;
}

struct ModulusCurve {
    std::vector<double> t_values;
    std::vector<double> omega;
    std::vector<bool> unresolved;  // t below one spacing
    int k = 1;
    double p = 1.0;
};

/// Omega_k(u; t)_{L^p} = sup over lattice shifts with |h| <= t of ||Delta^k_h u||_{L^p}.
inline ModulusCurve modulus_of_continuity(const GridFunction& u, int k, double p, const ShiftLattice& lattice,
                                          const std::vector<double>& t_values,
                                          DifferenceSupport support = DifferenceSupport::whole_space)
{
    if (k < 1 || !(p > 0.0)) {
        throw std::invalid_argument("modulus_of_continuity: need k >= 1 and p > 0");
    }
    const auto norms = lattice_difference_norms(u, lattice, k, p, support);
    const auto& d = u.domain();
    const auto& offs = lattice.offsets();
    ModulusCurve c;
    c.k = k;
    c.p = p;
    for (double t : t_values) {
        double best = 0.0;
        for (std::size_t i = 0; i < offs.size(); ++i) {
            if (d.length(offs[i]) <= t * (1.0 + 1e-12)) {
                best = std::max(best, norms[i]);
            }
        }
        c.t_values.push_back(t);
        c.omega.push_back(best);
        c.unresolved.push_back(t < d.spacing * (1.0 - 1e-12));
    }
    return c;
}

struct SupResult {
    double value = 0.0;
    Offset argmax{};
};

namespace detail {
inline SupResult besov_sup_impl(const GridFunction& u, double s, double q, const ShiftLattice& lattice,
                                DifferenceSupport support, bool weak)
{
    if (!(s > 0.0 && s <= 1.0) || !(q > 0.0)) {
        throw std::invalid_argument("besov_sup_norm: need 0 < s <= 1 and q > 0");
    }
    auto r = lattice_difference_norms(u, lattice, 1, q, support, weak);
    const auto& offs = lattice.offsets();
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] /= std::pow(u.domain().length(offs[i]), s);
    }
    const auto best = deterministic_argmax(r);
    return {r[best], offs[best]};
}
}  // namespace detail

/// sup_h ||u(.+h) - u||_{L^q} / |h|^s over the lattice.
inline SupResult besov_sup_norm(const GridFunction& u, double s, double q, const ShiftLattice& lattice,
                                DifferenceSupport support = DifferenceSupport::whole_space)
{
    return detail::besov_sup_impl(u, s, q, lattice, support, false);
}

/// Same with the weak L^q quasi-norm of the difference.
inline SupResult besov_sup_norm_weak(const GridFunction& u, double s, double q, const ShiftLattice& lattice,
                                     DifferenceSupport support = DifferenceSupport::whole_space)
{
    return detail::besov_sup_impl(u, s, q, lattice, support, true);
}

struct BesovIntegralResult {
    double value = 0.0;
    int k = 1;
    double t_min = 0.0;       // smallest lattice length; the modulus is 0 below it
    double t_max = 0.0;       // largest lattice length; the modulus is frozen beyond it
    double tail_share = 0.0;  // fraction of the q-th power coming from (t_max, inf)
};

/// Integral-form B^s_{p,q} seminorm:
///   q < inf: ( int_0^inf (Omega_k(t)/t^s)^q dt/t )^{1/q}
///   q = inf: sup_t Omega_k(t)/t^s
/// with Omega_k the lattice modulus and k = floor(s) + 1 unless overridden.
inline BesovIntegralResult besov_integral_norm(const GridFunction& u, double s, double p, double q,
                                               const ShiftLattice& lattice,
                                               DifferenceSupport support = DifferenceSupport::whole_space,
                                               int k_override = 0)
{
    if (!(s > 0.0) || !(p > 0.0) || !(q > 0.0)) {
        throw std::invalid_argument("besov_integral_norm: s, p, q must be positive");
    }
    const int k = k_override > 0 ? k_override : static_cast<int>(std::floor(s)) + 1;
    if (!(s < static_cast<double>(k))) {
        throw std::invalid_argument("besov_integral_norm: k must exceed s");
    }
    const auto norms = lattice_difference_norms(u, lattice, k, p, support);
    const auto m = step_modulus(u.domain(), lattice, norms);
    BesovIntegralResult r;
    r.k = k;
    r.t_min = m.lengths.front();
    r.t_max = m.lengths.back();
    if (std::isinf(q)) {
        for (std::size_t i = 0; i < m.lengths.size(); ++i) {
            r.value = std::max(r.value, m.omega[i] / std::pow(m.lengths[i], s));
        }
        return r;
    }
    const double sq = s * q;
    std::vector<double> terms(m.lengths.size());
    for (std::size_t i = 0; i < m.lengths.size(); ++i) {
        const double a = std::pow(m.lengths[i], -sq);
        const double b = i + 1 < m.lengths.size() ? std::pow(m.lengths[i + 1], -sq) : 0.0;
        terms[i] = detail::powabs(m.omega[i], q) * (a - b) / sq;
    }
    const double total = pairwise_sum(terms);
    r.tail_share = total > 0.0 ? terms.back() / total : 0.0;
    r.value = std::pow(total, 1.0 / q);
    return r;
}

struct GagliardoResult {
    double value = 0.0;       // (sum over pairs within the cutoff)^{1/q}
    double tail_bound = 0.0;  // bound on the omitted q-th power from pairs beyond the cutoff
    std::size_t offsets = 0;  // ordered offsets summed
};

namespace detail {
// Half of the nonzero offsets within `reach` cells (the other half is the negation).
inline std::vector<Offset> half_ball(int dim, double reach)
{
    std::vector<Offset> o;
    const auto r = static_cast<std::ptrdiff_t>(std::floor(reach));
    const std::ptrdiff_t r1 = dim == 2 ? r : 0;
    for (std::ptrdiff_t a = 0; a <= r; ++a) {
        for (std::ptrdiff_t b = -r1; b <= r1; ++b) {
            if ((a == 0 && b <= 0) || static_cast<double>(a * a + b * b) > reach * reach) {
                continue;
            }
            o.push_back({a, b});
        }
    }
    return o;
}

inline void check_gagliardo(const GridFunction& u, double s, double q, double cutoff)
{
    if (!(s > 0.0 && s < 1.0) || !(q > 0.0)) {
        throw std::invalid_argument("gagliardo: need 0 < s < 1 and q > 0");
    }
    if (!(cutoff >= u.domain().spacing)) {
        throw std::invalid_argument("gagliardo: cutoff radius below one cell spacing");
    }
}
}  // namespace detail

/// Gagliardo seminorm over ordered cell pairs (x, z) with 0 < |x - z| <= cutoff,
///   ( sum |u(x) - u(z)|^q / |x - z|^{sq+N} * vol^2 )^{1/q},
/// using the zero extension outside the box.
inline GagliardoResult gagliardo_seminorm(const GridFunction& u, double s, double q, double cutoff)
{
    detail::check_gagliardo(u, s, q, cutoff);
    const auto& d = u.domain();
    const double n_dim = static_cast<double>(d.dim);
    const double vol = d.cell_volume();
    const auto offs = detail::half_ball(d.dim, cutoff / d.spacing);
    std::vector<double> u_pow(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u_pow[i] = detail::powabs(u[i], q);
    }
    const double lq_sum = pairwise_sum(u_pow);  // sum |u|^q over cells
    auto terms = parallel_map<double>(offs.size(), [&](std::size_t i) {
        const auto& o = offs[i];
        const double w = vol * vol / std::pow(d.length(o), s * q + n_dim);
        const bool disjoint = static_cast<std::size_t>(std::llabs(o[0])) >= d.cells[0] ||
                              static_cast<std::size_t>(std::llabs(o[1])) >= d.cells[1];
        if (disjoint) {
            // u(x+h) and u(x) never overlap: the sum is sum |u|^q counted twice
            return 2.0 * lq_sum * w;
        }
        return difference_power_sum(u, o, 1, q) / vol * w;
    });
    GagliardoResult r;
    r.value = std::pow(2.0 * pairwise_sum(terms), 1.0 / q);
    r.offsets = 2 * offs.size();
    // |a - b|^q <= c_q (|a|^q + |b|^q); integrate |y|^{-sq-N} outside the cutoff
    const double c_q = std::max(1.0, std::pow(2.0, q - 1.0));
    r.tail_bound = c_q * 2.0 * lq_sum * vol * unit_sphere_area(d.dim) * std::pow(cutoff, -s * q) / (s * q);
    return r;
}

/// Weak Gagliardo seminorm
///   sup_t ( t * (L^N x L^N / |x-z|^{sq+N}){ |u(x) - u(z)|^q > t } )^{1/q}
/// over the same pairs, with the threshold scanned exactly.
inline double gagliardo_weak_seminorm(const GridFunction& u, double s, double q, double cutoff)
{
    detail::check_gagliardo(u, s, q, cutoff);
    const auto& d = u.domain();
    const double n_dim = static_cast<double>(d.dim);
    const double vol = d.cell_volume();
    const auto offs = detail::half_ball(d.dim, cutoff / d.spacing);
    const auto per_offset = parallel_map<std::vector<double>>(offs.size(), [&](std::size_t i) {
        auto v = difference_values(u, offs[i], 1);
        std::erase(v, 0.0);
        return v;
    });
    std::vector<std::pair<double, double>> samples;
    for (std::size_t i = 0; i < offs.size(); ++i) {
        // the negated offset contributes the same multiset of values
        const double w = 2.0 * vol * vol / std::pow(d.length(offs[i]), s * q + n_dim);
        for (double v : per_offset[i]) {
            samples.emplace_back(std::fabs(v), w);
        }
    }
    if (samples.empty()) {
        return 0.0;
    }
    return std::pow(weak_sup(DistributionCurve(std::move(samples), q)), 1.0 / q);
}

/// ||u||_{BV} = sup_h ||u(.+h) - u||_{L^1} / |h| over the lattice.
inline SupResult bv_variation(const GridFunction& u, const ShiftLattice& lattice,
                              DifferenceSupport support = DifferenceSupport::whole_space)
{
    return besov_sup_norm(u, 1.0, 1.0, lattice, support);
}

/// Weak variant: sup_h [u(.+h) - u]_{L^1_w} / |h|.
inline SupResult bv_variation_weak(const GridFunction& u, const ShiftLattice& lattice,
                                   DifferenceSupport support = DifferenceSupport::whole_space)
{
    return besov_sup_norm_weak(u, 1.0, 1.0, lattice, support);
}

/// Perimeter-type total variation: the lattice average of ||u(.+h) - u||_{L^1}/|h|
/// divided by the sphere mean of |z_1|. For a set of finite perimeter each
/// quotient is roughly Per * mean|nu . h/|h||, so the average recovers Per.
inline double bv_perimeter_estimate(const GridFunction& u, const ShiftLattice& lattice,
                                    DifferenceSupport support = DifferenceSupport::whole_space)
{
    auto r = lattice_difference_norms(u, lattice, 1, 1.0, support);
    const auto& offs = lattice.offsets();
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] /= u.domain().length(offs[i]);
    }
    return pairwise_sum(r) / static_cast<double>(r.size()) / sphere_mean_abs_first(u.domain().dim);
}

/// Central-difference partial derivatives on the box padded by one cell.
inline std::vector<GridFunction> central_gradient(const GridFunction& u)
{
    const GridFunction w = pad(u, 1);
    const auto& d = w.domain();
    std::vector<GridFunction> g;
    for (int a = 0; a < d.dim; ++a) {
        Offset e{a == 0 ? 1 : 0, a == 1 ? 1 : 0};
        std::vector<double> v(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
            const auto c = d.unflat(i);
            v[i] = (w.at({c[0] + e[0], c[1] + e[1]}) - w.at({c[0] - e[0], c[1] - e[1]})) / (2.0 * d.spacing);
        }
        g.emplace_back(d, std::move(v));
    }
    return g;
}

/// Checks (1/N) sum_i ||d_i u||^q <= sup_h int |u(x+h)-u(x)|^q/|h|^q dx <= ||grad u||^q_{L^q}
/// with multiplicative slack; gradients by central differences.
inline Report sobolev_difference_check(const GridFunction& u, double q, const ShiftLattice& lattice,
                                       double slack = 0.05)
{
    if (!(q > 1.0)) {
        throw std::invalid_argument("sobolev_difference_check: q must exceed 1");
    }
    const auto& d = u.domain();
    auto sums = parallel_map<double>(lattice.size(), [&](std::size_t i) {
        const auto& o = lattice.offsets()[i];
        return difference_power_sum(u, o, 1, q) / std::pow(d.length(o), q);
    });
    const double sup_quotient = sums[deterministic_argmax(sums)];
    const auto g = central_gradient(u);
    const auto& gd = g.front().domain();
    std::vector<double> grad_pow(gd.size());
    double partial_mean = 0.0;
    for (std::size_t i = 0; i < gd.size(); ++i) {
        double sq = 0.0;
        for (const auto& gi : g) {
            sq += gi[i] * gi[i];
        }
        grad_pow[i] = std::pow(sq, q / 2.0);
    }
    const double grad_norm_q = pairwise_sum(grad_pow) * gd.cell_volume();
    for (const auto& gi : g) {
        partial_mean += std::pow(lebesgue_norm(gi, q), q);
    }
    partial_mean /= static_cast<double>(d.dim);
    auto r = Report::inequality("sobolev_difference", sup_quotient, grad_norm_q, slack, {{"q", q}, {"dim", d.dim}});
    const bool lower_ok = sup_quotient >= partial_mean * (1.0 - slack);
    r.extra["lower_bound"] = partial_mean;
    r.extra["lower_ok"] = lower_ok;
    r.extra["upper_ok"] = r.pass;
    r.pass = r.pass && lower_ok;
    return r;
}

/// Marchaud-type ratio
///   Omega_n(t) / ( t^n [ ||u||_p + ( int_t^inf (s^{-n} Omega_k(s))^mu ds/s )^{1/mu} ] )
/// over t_values. Reports the largest ratio; passes when every ratio is finite.
inline Report marchaud_probe(const GridFunction& u, double p, int n, int k, double mu,
                             const std::vector<double>& t_values, const ShiftLattice& lattice)
{
    if (n < 1 || k <= n) {
        throw std::invalid_argument("marchaud_probe: need 1 <= n < k");
    }
    if (!(p > 0.0) || !(mu > 0.0) || mu > std::min(1.0, p)) {
        throw std::invalid_argument("marchaud_probe: need 0 < mu <= min(1, p)");
    }
    const auto& d = u.domain();
    const auto mk = step_modulus(d, lattice, lattice_difference_norms(u, lattice, k, p));
    const auto mn = modulus_of_continuity(u, n, p, lattice, t_values);
    const double up = lebesgue_norm(u, p);
    const double e = static_cast<double>(n) * mu;
    nlohmann::json curve = nlohmann::json::array();
    double worst = 0.0;
    bool finite = true;
    for (std::size_t ti = 0; ti < t_values.size(); ++ti) {
        const double t = t_values[ti];
        // int_t^inf Omega_k(s)^mu s^{-n mu - 1} ds over the step modulus
        double integral = 0.0;
        for (std::size_t i = 0; i < mk.lengths.size(); ++i) {
            const double a = std::max(t, mk.lengths[i]);
            const double b = i + 1 < mk.lengths.size() ? mk.lengths[i + 1] : infinity;
            if (b <= a) {
                continue;
            }
            const double upper = std::isinf(b) ? 0.0 : std::pow(b, -e);
            integral += std::pow(mk.omega[i], mu) * (std::pow(a, -e) - upper) / e;
        }
        const double bracket = std::pow(t, n) * (up + std::pow(integral, 1.0 / mu));
        const double ratio = bracket > 0.0 ? mn.omega[ti] / bracket : 0.0;
        finite = finite && std::isfinite(ratio);
        worst = std::max(worst, ratio);
        curve.push_back({{"t", t}, {"lhs", mn.omega[ti]}, {"rhs", bracket}, {"ratio", ratio}});
    }
    Report r;
    r.op = "marchaud";
    r.params = {{"p", p}, {"n", n}, {"k", k}, {"mu", mu}};
    r.lhs = worst;
    r.rhs = 0.0;
    r.ratio = worst;
    r.pass = finite;
    r.tolerance = 0.0;
    r.extra["curve"] = std::move(curve);
    return r;
}

}  // namespace oscillab
