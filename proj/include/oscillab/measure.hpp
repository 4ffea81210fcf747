#pragma once

// Distribution functions and Lebesgue / weak-Lebesgue / Lorentz quasi-norms.
//
// For a piecewise-constant function the distribution function
//     lambda(t) = measure{ |u|^q > t }
// is a nonincreasing step function whose jumps sit at the distinct values
// |v|^q. Every Lorentz quasi-norm is then a finite sum over the steps, so
// no quadrature in t is ever needed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "grid.hpp"
#include "parallel.hpp"
#include "report.hpp"

namespace oscillab {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Step function t -> measure{|u|^q > t}.
///
/// With amplitudes a_0 < ... < a_{m-1} (the distinct nonzero |v|) and
/// breakpoints t_i = a_i^q, the curve equals masses[i] on [t_{i-1}, t_i)
/// (t_{-1} = 0) and 0 from t_{m-1} on.
class DistributionCurve {
public:
    DistributionCurve() = default;

    /// Builds the curve from (|value|, mass) pairs; zero values are dropped.
    DistributionCurve(std::vector<std::pair<double, double>> samples, double q) : q_(q)
    {
        if (!(q > 0.0)) {
            throw std::invalid_argument("DistributionCurve: q must be positive");
        }
        std::erase_if(samples, [](const auto& s) { return s.first == 0.0; });
        std::sort(samples.begin(), samples.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        // Accumulate from the top so masses[i] is the mass strictly above a_i.
        std::vector<double> amps;
        std::vector<double> above;  // mass of samples >= amplitude
        double running = 0.0;
        std::size_t i = 0;
        while (i < samples.size()) {
            const double a = samples[i].first;
            std::vector<double> group;
            while (i < samples.size() && samples[i].first == a) {
                group.push_back(samples[i].second);
                ++i;
            }
            running += pairwise_sum(group);
            amps.push_back(a);
            above.push_back(running);
        }
        std::reverse(amps.begin(), amps.end());
        std::reverse(above.begin(), above.end());
        amplitudes_ = std::move(amps);
        masses_ = std::move(above);
        breakpoints_.resize(amplitudes_.size());
        for (std::size_t k = 0; k < amplitudes_.size(); ++k) {
            breakpoints_[k] = std::pow(amplitudes_[k], q_);
        }
    }

    [[nodiscard]] double q() const { return q_; }
    [[nodiscard]] std::span<const double> breakpoints() const { return breakpoints_; }
    [[nodiscard]] std::span<const double> amplitudes() const { return amplitudes_; }

    /// masses()[i] is the value of the curve on [t_{i-1}, t_i).
    [[nodiscard]] std::span<const double> masses() const { return masses_; }
    [[nodiscard]] bool empty() const { return breakpoints_.empty(); }

    /// lambda(t) = measure{|u|^q > t}.
    [[nodiscard]] double operator()(double t) const
    {
        if (t < 0.0) {
            t = 0.0;
        }
        // first breakpoint strictly greater than t
        const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
        if (it == breakpoints_.end()) {
            return 0.0;
        }
        return masses_[static_cast<std::size_t>(it - breakpoints_.begin())];
    }

private:
    double q_ = 1.0;
    std::vector<double> amplitudes_;
    std::vector<double> breakpoints_;
    std::vector<double> masses_;
};

/// Finite list of (value, weight) pairs carrying an arbitrary measure.
class WeightedSampleSet {
public:
    WeightedSampleSet() = default;

    void add(double value, double weight)
    {
        if (!(weight > 0.0) || !std::isfinite(weight) || !std::isfinite(value)) {
            throw std::invalid_argument("WeightedSampleSet: weights must be positive and values finite");
        }
        samples_.emplace_back(value, weight);
    }

    void append(const WeightedSampleSet& other)
    {
        samples_.insert(samples_.end(), other.samples_.begin(), other.samples_.end());
    }

    [[nodiscard]] std::span<const std::pair<double, double>> samples() const { return samples_; }
    [[nodiscard]] std::size_t size() const { return samples_.size(); }
    [[nodiscard]] bool empty() const { return samples_.empty(); }

    [[nodiscard]] DistributionCurve distribution(double q) const
    {
        std::vector<std::pair<double, double>> s;
        s.reserve(samples_.size());
        for (const auto& [v, w] : samples_) {
            s.emplace_back(std::fabs(v), w);
        }
        return {std::move(s), q};
    }

private:
    std::vector<std::pair<double, double>> samples_;
};

namespace detail {
inline void check_region(const GridFunction& u, const CellMask* region)
{
    if (region == nullptr) {
        return;
    }
    if (!(region->domain() == u.domain())) {
        throw std::invalid_argument("region mask does not match the grid");
    }
    if (region->count() == 0) {
        throw std::invalid_argument("region mask selects no cells");
    }
}
}  // namespace detail

/// Distribution curve of u over the whole box or over the masked cells.
inline DistributionCurve distribution(const GridFunction& u, double q, const CellMask* region = nullptr)
{
    detail::check_region(u, region);
    const double vol = u.domain().cell_volume();
    std::vector<std::pair<double, double>> s;
    s.reserve(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (region == nullptr || (*region)[i]) {
            s.emplace_back(std::fabs(u[i]), vol);
        }
    }
    return {std::move(s), q};
}

/// sup over t > 0 of t * lambda(t), i.e. the q-th power of the weak norm.
inline double weak_sup(const DistributionCurve& curve)
{
    const auto bps = curve.breakpoints();
    const auto mass = curve.masses();
    double best = 0.0;
    for (std::size_t i = 0; i < bps.size(); ++i) {
        best = std::max(best, bps[i] * mass[i]);
    }
    return best;
}

/// ||u||_{L^{q,gamma}} from its distribution curve; gamma = infinity gives
/// the weak norm [u]_{L^q_w}.
inline double lorentz_norm(const DistributionCurve& curve, double gamma)
{
    if (!(gamma > 0.0)) {
        throw std::invalid_argument("lorentz_norm: gamma must be positive");
    }
    const auto amps = curve.amplitudes();
    const auto bps = curve.breakpoints();
    const auto mass = curve.masses();
    const double q = curve.q();
    if (amps.empty()) {
        return 0.0;
    }
    if (std::isinf(gamma)) {
        // sup of t * lambda(t) is approached at the left limit of each breakpoint
        return std::pow(weak_sup(curve), 1.0 / q);
    }
    // piece i contributes masses[i]^{gamma/q} * (q/gamma) * (a_i^gamma - a_{i-1}^gamma)
    const double e = gamma / q;
    std::vector<double> terms(amps.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double cur = std::pow(amps[i], gamma);
        terms[i] = std::pow(mass[i], e) * (cur - prev);
        prev = cur;
    }
    return std::pow(pairwise_sum(terms) / e, 1.0 / gamma);
}

/// (sum |v|^p * cell volume)^{1/p} over the box or the masked cells.
inline double lebesgue_norm(const GridFunction& u, double p, const CellMask* region = nullptr)
{
    if (!(p > 0.0)) {
        throw std::invalid_argument("lebesgue_norm: p must be positive");
    }
    detail::check_region(u, region);
    std::vector<double> terms(u.size(), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (region == nullptr || (*region)[i]) {
            terms[i] = std::pow(std::fabs(u[i]), p);
        }
    }
    return std::pow(pairwise_sum(terms) * u.domain().cell_volume(), 1.0 / p);
}

/// Essential supremum of |u|.
inline double sup_norm(const GridFunction& u) { return u.max_abs(); }

/// [u]_{L^q_w} = ||u||_{L^{q,infinity}}.
inline double weak_norm(const GridFunction& u, double q, const CellMask* region = nullptr)
{
    return lorentz_norm(distribution(u, q, region), infinity);
}

/// sup over s in (0, upper] of s * lambda(s), evaluated at breakpoint left
/// limits below `upper` and at `upper` itself.
inline double truncated_sup(const DistributionCurve& curve, double upper)
{
    if (!(upper > 0.0)) {
        throw std::invalid_argument("truncated_sup: upper must be positive");
    }
    const auto bps = curve.breakpoints();
    const auto mass = curve.masses();
    double best = 0.0;
    for (std::size_t i = 0; i < bps.size(); ++i) {
        if (bps[i] <= upper) {
            best = std::max(best, bps[i] * mass[i]);
        } else {
            best = std::max(best, upper * mass[i]);
            break;
        }
    }
    return best;
}

/// sup over thresholds t of t * (total weight of samples with |v|^q > t).
/// Returns the q-th power of the weak norm of the weighted sample set.
inline double weighted_weak_norm(const WeightedSampleSet& samples, double q)
{
    if (samples.empty()) {
        throw std::invalid_argument("weighted_weak_norm: empty sample set");
    }
    return weak_sup(samples.distribution(q));
}

/// Checks || |u|^r ||_{L^{p,q}} = ||u||^r_{L^{rp,rq}} (q may be infinity).
inline Report power_identity_check(const GridFunction& u, double r, double p, double q, double tol = 1e-9)
{
    if (!(r > 0.0) || !(p > 0.0)) {
        throw std::invalid_argument("power_identity_check: r and p must be positive");
    }
    const double lhs = lorentz_norm(distribution(u.abs_pow(r), p), q);
    const double rhs = std::pow(lorentz_norm(distribution(u, r * p), r * q), r);
    return Report::equality("power_identity", lhs, rhs, tol, {{"r", r}, {"p", p}, {"q", detail::number(q)}});
}

}  // namespace oscillab
