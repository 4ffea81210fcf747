#pragma once

// Radial kernel families rho_eps(|z|) with unit mass on R^N.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace oscillab {

enum class KernelKind { box, gaussian_radial, exponential_radial };

inline std::string_view to_string(KernelKind k)
{
    switch (k) {
        case KernelKind::box: return "box";
        case KernelKind::gaussian_radial: return "gaussian_radial";
        case KernelKind::exponential_radial: return "exponential_radial";
    }
    return "box";
}

inline KernelKind kernel_kind_from_string(std::string_view s)
{
    if (s == "box") return KernelKind::box;
    if (s == "gaussian" || s == "gaussian_radial") return KernelKind::gaussian_radial;
    if (s == "exponential" || s == "exponential_radial") return KernelKind::exponential_radial;
    throw std::invalid_argument("unknown kernel kind: " + std::string(s));
}

/// Surface area of the unit sphere S^{N-1}: 2 for N=1, 2*pi for N=2.
inline double unit_sphere_area(int dim) { return dim == 1 ? 2.0 : 2.0 * std::numbers::pi; }

/// Average of |z_1| over S^{N-1}: 1 for N=1, 2/pi for N=2.
inline double sphere_mean_abs_first(int dim) { return dim == 1 ? 1.0 : 2.0 / std::numbers::pi; }

class KernelFamily {
public:
    KernelFamily(KernelKind kind, int dim) : kind_(kind), dim_(dim)
    {
        if (dim != 1 && dim != 2) {
            throw std::invalid_argument("KernelFamily: dim must be 1 or 2");
        }
    }

    [[nodiscard]] KernelKind kind() const { return kind_; }
    [[nodiscard]] int dim() const { return dim_; }

    /// rho_eps(r). Box: uniform on the ball of radius eps. Gaussian: standard
    /// deviation eps. Exponential: exp(-r/eps).
    [[nodiscard]] double profile(double r, double eps) const
    {
        check_eps(eps);
        switch (kind_) {
            case KernelKind::box: {
                const double vol = dim_ == 1 ? 2.0 * eps : std::numbers::pi * eps * eps;
                return r < eps ? 1.0 / vol : 0.0;
            }
            case KernelKind::gaussian_radial: {
                const double norm = dim_ == 1 ? std::sqrt(2.0 * std::numbers::pi) * eps
                                              : 2.0 * std::numbers::pi * eps * eps;
                return std::exp(-0.5 * (r * r) / (eps * eps)) / norm;
            }
            case KernelKind::exponential_radial: {
                const double norm = dim_ == 1 ? 2.0 * eps : 2.0 * std::numbers::pi * eps * eps;
                return std::exp(-r / eps) / norm;
            }
        }
        return 0.0;
    }

    /// Radius beyond which the profile is below 1e-12 of its peak (box: eps).
    [[nodiscard]] double effective_radius(double eps) const
    {
        check_eps(eps);
        switch (kind_) {
            case KernelKind::box: return eps;
            case KernelKind::gaussian_radial: return eps * std::sqrt(2.0 * std::log(1e12));
            case KernelKind::exponential_radial: return eps * std::log(1e12);
        }
        return eps;
    }

    /// |S^{N-1}| * integral_a^b rho_eps(r) r^{N-1} dr by composite
    /// Gauss-Legendre quadrature.
    [[nodiscard]] double radial_integral(double a, double b, double eps) const
    {
        if (kind_ == KernelKind::box) {
            b = std::min(b, eps);
            if (b <= a) {
                return 0.0;
            }
            const double c = unit_sphere_area(dim_) / (dim_ == 1 ? 2.0 * eps : std::numbers::pi * eps * eps);
            return dim_ == 1 ? c * (b - a) : c * 0.5 * (b * b - a * a);
        }
        static constexpr double nodes[5] = {0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459389640,
                                            0.9061798459389640};
        static constexpr double weights[5] = {0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                              0.2369268850561891, 0.2369268850561891};
        const int panels = 2000;
        const double w = (b - a) / panels;
        double total = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double mid = a + (p + 0.5) * w;
            double s = 0.0;
            for (int k = 0; k < 5; ++k) {
                const double r = mid + 0.5 * w * nodes[k];
                s += weights[k] * profile(r, eps) * (dim_ == 1 ? 1.0 : r);
            }
            total += 0.5 * w * s;
        }
        return unit_sphere_area(dim_) * total;
    }

    /// integral over R^N of rho_eps(|z|) dz, truncated at the effective radius.
    [[nodiscard]] double mass(double eps) const { return radial_integral(0.0, effective_radius(eps), eps); }

    /// integral_delta^inf rho_eps(r) r^{N-1} dr (without the sphere factor).
    [[nodiscard]] double tail(double delta, double eps) const
    {
        const double r = effective_radius(eps);
        if (delta >= r) {
            return 0.0;
        }
        return radial_integral(delta, r, eps) / unit_sphere_area(dim_);
    }

    /// Unit mass within tol at every eps, and tail(delta) nonincreasing along
    /// the (decreasing) eps schedule.
    [[nodiscard]] bool validate(const std::vector<double>& eps_schedule, double delta, double tol = 1e-6) const
    {
        double prev_tail = INFINITY;
        for (double e : eps_schedule) {
            if (std::fabs(mass(e) - 1.0) > tol) {
                return false;
            }
            const double t = tail(delta, e);
            if (t > prev_tail + 1e-15) {
                return false;
            }
            prev_tail = t;
        }
        return true;
    }

private:
    static void check_eps(double eps)
    {
        if (!(eps > 0.0)) {
            throw std::invalid_argument("KernelFamily: eps must be positive");
        }
    }

    KernelKind kind_;
    int dim_;
};

}  // namespace oscillab
