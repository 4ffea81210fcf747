#pragma once

// Sampled functions on uniform axis-aligned grids (N = 1 or 2).
//
// A GridFunction is the piecewise-constant function equal to values[c] on
// cell c and zero outside the box. All integrals in the library are exact
// integrals of this interpolant.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace oscillab {

/// Integer cell offset. For 1D grids the second component is always 0.
using Offset = std::array<std::ptrdiff_t, 2>;

/// Integer cell position (row, column); column is 0 for 1D grids.
using CellIndex = std::array<std::ptrdiff_t, 2>;

struct GridDomain {
    int dim = 1;
    std::array<double, 2> origin{0.0, 0.0};
    std::array<std::size_t, 2> cells{1, 1};
    double spacing = 1.0;

    GridDomain() = default;

    GridDomain(int d, std::array<double, 2> o, std::array<std::size_t, 2> n, double h)
        : dim(d), origin(o), cells(n), spacing(h)
    {
        if (dim != 1 && dim != 2) {
            throw std::invalid_argument("GridDomain: dim must be 1 or 2");
        }
        if (dim == 1) {
            cells[1] = 1;
            origin[1] = 0.0;
        }
        if (cells[0] < 1 || cells[1] < 1) {
            throw std::invalid_argument("GridDomain: cells_per_axis must be >= 1");
        }
        if (!(spacing > 0.0) || !std::isfinite(spacing)) {
            throw std::invalid_argument("GridDomain: spacing must be positive");
        }
    }

    /// 1D domain [lo, lo + n*h).
    static GridDomain line(double lo, std::size_t n, double h) { return {1, {lo, 0.0}, {n, 1}, h}; }

    /// 2D domain with n0 rows along axis 0 and n1 columns along axis 1.
    static GridDomain plane(std::array<double, 2> lo, std::size_t n0, std::size_t n1, double h)
    {
        return {2, lo, {n0, n1}, h};
    }

    /// Domain covering [-half, half]^dim with n cells per axis.
    static GridDomain centered(int dim, std::size_t n, double half)
    {
        const double h = 2.0 * half / static_cast<double>(n);
        if (dim == 1) {
            return line(-half, n, h);
        }
        return plane({-half, -half}, n, n, h);
    }

    [[nodiscard]] std::size_t size() const { return cells[0] * cells[1]; }
    [[nodiscard]] double cell_volume() const { return dim == 1 ? spacing : spacing * spacing; }
    [[nodiscard]] double measure() const { return cell_volume() * static_cast<double>(size()); }
    [[nodiscard]] std::size_t min_cells() const { return dim == 1 ? cells[0] : std::min(cells[0], cells[1]); }

    [[nodiscard]] bool contains(CellIndex c) const
    {
        return c[0] >= 0 && c[1] >= 0 && static_cast<std::size_t>(c[0]) < cells[0] &&
               static_cast<std::size_t>(c[1]) < cells[1];
    }

    [[nodiscard]] std::size_t flat(CellIndex c) const
    {
        return static_cast<std::size_t>(c[0]) * cells[1] + static_cast<std::size_t>(c[1]);
    }

    [[nodiscard]] CellIndex unflat(std::size_t i) const
    {
        return {static_cast<std::ptrdiff_t>(i / cells[1]), static_cast<std::ptrdiff_t>(i % cells[1])};
    }

    [[nodiscard]] std::array<double, 2> center(CellIndex c) const
    {
        std::array<double, 2> x{origin[0] + (static_cast<double>(c[0]) + 0.5) * spacing, 0.0};
        if (dim == 2) {
            x[1] = origin[1] + (static_cast<double>(c[1]) + 0.5) * spacing;
        }
        return x;
    }

    /// Euclidean length of the physical shift spacing*offset.
    [[nodiscard]] double length(Offset o) const
    {
        const double a = static_cast<double>(o[0]);
        const double b = static_cast<double>(o[1]);
        return spacing * std::sqrt(a * a + b * b);
    }

    [[nodiscard]] double diameter() const
    {
        const double a = static_cast<double>(cells[0]);
        const double b = dim == 2 ? static_cast<double>(cells[1]) : 0.0;
        return spacing * std::sqrt(a * a + b * b);
    }

    /// Same cell layout with box and spacing scaled by lambda about the origin of coordinates.
    [[nodiscard]] GridDomain dilated(double lambda) const
    {
        return {dim, {origin[0] * lambda, origin[1] * lambda}, cells, spacing * lambda};
    }

    friend bool operator==(const GridDomain&, const GridDomain&) = default;
};

/// Converts a dim-length integer vector into an Offset, rejecting mismatches.
inline Offset make_offset(const GridDomain& d, std::span<const std::ptrdiff_t> v)
{
    if (v.size() != static_cast<std::size_t>(d.dim)) {
        throw std::invalid_argument("offset length " + std::to_string(v.size()) + " does not match dim " +
                                    std::to_string(d.dim));
    }
    return {v[0], d.dim == 2 ? v[1] : 0};
}

class GridFunction {
public:
    GridFunction() = default;

    explicit GridFunction(GridDomain domain) : domain_(std::move(domain)), values_(domain_.size(), 0.0) {}

    GridFunction(GridDomain domain, std::vector<double> values)
        : domain_(std::move(domain)), values_(std::move(values))
    {
        if (values_.size() != domain_.size()) {
            throw std::invalid_argument("GridFunction: expected " + std::to_string(domain_.size()) +
                                        " values, got " + std::to_string(values_.size()));
        }
        for (double v : values_) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("GridFunction: values must be finite");
            }
        }
    }

    /// Samples f at cell centers.
    template <typename Fn>
    static GridFunction sample(const GridDomain& d, Fn&& f)
    {
        std::vector<double> v(d.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = f(d.center(d.unflat(i)));
        }
        return {d, std::move(v)};
    }

    [[nodiscard]] const GridDomain& domain() const { return domain_; }
    [[nodiscard]] std::span<const double> values() const { return values_; }
    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

    /// Value at a cell index, zero outside the box.
    [[nodiscard]] double at(CellIndex c) const { return domain_.contains(c) ? values_[domain_.flat(c)] : 0.0; }

    /// Applies fn to every value.
    template <typename Fn>
    [[nodiscard]] GridFunction map(Fn&& fn) const
    {
        std::vector<double> v(values_.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = fn(values_[i]);
        }
        return {domain_, std::move(v)};
    }

    [[nodiscard]] GridFunction scaled(double c) const
    {
        return map([c](double v) { return c * v; });
    }

    [[nodiscard]] GridFunction shifted_by_constant(double c) const
    {
        return map([c](double v) { return v + c; });
    }

    [[nodiscard]] GridFunction abs_pow(double r) const
    {
        return map([r](double v) { return std::pow(std::fabs(v), r); });
    }

    /// Same values on the dilated box.
    [[nodiscard]] GridFunction dilated(double lambda) const { return {domain_.dilated(lambda), values_}; }

    [[nodiscard]] double max_abs() const
    {
        double m = 0.0;
        for (double v : values_) {
            m = std::max(m, std::fabs(v));
        }
        return m;
    }

private:
    GridDomain domain_{};
    std::vector<double> values_{};
};

/// Cell subset used to restrict norms and energies to a region.
class CellMask {
public:
    CellMask() = default;
    CellMask(GridDomain d, std::vector<std::uint8_t> bits) : domain_(std::move(d)), bits_(std::move(bits))
    {
        if (bits_.size() != domain_.size()) {
            throw std::invalid_argument("CellMask: size does not match domain");
        }
    }

    static CellMask all(const GridDomain& d) { return {d, std::vector<std::uint8_t>(d.size(), 1)}; }

    /// Cells whose centers lie in the closed physical box [lo, hi].
    static CellMask box(const GridDomain& d, std::array<double, 2> lo, std::array<double, 2> hi)
    {
        std::vector<std::uint8_t> bits(d.size(), 0);
        for (std::size_t i = 0; i < bits.size(); ++i) {
            const auto x = d.center(d.unflat(i));
            bool in = x[0] >= lo[0] && x[0] <= hi[0];
            if (d.dim == 2) {
                in = in && x[1] >= lo[1] && x[1] <= hi[1];
            }
            bits[i] = in ? 1 : 0;
        }
        return {d, std::move(bits)};
    }

    [[nodiscard]] const GridDomain& domain() const { return domain_; }
    [[nodiscard]] bool operator[](std::size_t i) const { return bits_[i] != 0; }
    [[nodiscard]] bool contains(CellIndex c) const { return domain_.contains(c) && bits_[domain_.flat(c)] != 0; }
    [[nodiscard]] std::size_t count() const
    {
        std::size_t n = 0;
        for (auto b : bits_) {
            n += b != 0 ? 1 : 0;
        }
        return n;
    }

private:
    GridDomain domain_{};
    std::vector<std::uint8_t> bits_{};
};

/// v(x) = u(x + spacing*offset); cells whose source leaves the box read 0.
inline GridFunction shift(const GridFunction& u, Offset offset)
{
    const auto& d = u.domain();
    if (d.dim == 1 && offset[1] != 0) {
        throw std::invalid_argument("shift: nonzero second offset component on a 1D grid");
    }
    std::vector<double> v(d.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto c = d.unflat(i);
        v[i] = u.at({c[0] + offset[0], c[1] + offset[1]});
    }
    return {d, std::move(v)};
}

inline GridFunction shift(const GridFunction& u, std::span<const std::ptrdiff_t> offset)
{
    return shift(u, make_offset(u.domain(), offset));
}

inline GridFunction operator-(const GridFunction& a, const GridFunction& b)
{
    if (!(a.domain() == b.domain())) {
        throw std::invalid_argument("GridFunction difference: domains differ");
    }
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = a[i] - b[i];
    }
    return {a.domain(), std::move(v)};
}

/// Extends u by zeros: `before` cells prepended and `after` appended per axis.
inline GridFunction pad(const GridFunction& u, std::array<std::size_t, 2> before, std::array<std::size_t, 2> after)
{
    const auto& d = u.domain();
    if (d.dim == 1) {
        before[1] = after[1] = 0;
    }
    GridDomain e(d.dim,
                 {d.origin[0] - static_cast<double>(before[0]) * d.spacing,
                  d.origin[1] - static_cast<double>(before[1]) * d.spacing},
                 {d.cells[0] + before[0] + after[0], d.cells[1] + before[1] + after[1]}, d.spacing);
    std::vector<double> v(e.size(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto c = d.unflat(i);
        v[e.flat({c[0] + static_cast<std::ptrdiff_t>(before[0]), c[1] + static_cast<std::ptrdiff_t>(before[1])})] =
            u[i];
    }
    return {e, std::move(v)};
}

/// Symmetric zero padding by `cells` on every side.
inline GridFunction pad(const GridFunction& u, std::size_t cells) { return pad(u, {cells, cells}, {cells, cells}); }

/// k-th forward difference with step spacing*offset, built by the recursion
/// D^{n+1} = shift(D^n, offset) - D^n. Reads outside the box are zero, so
/// values are exact at every cell of the box (pad first for global support).
inline GridFunction k_difference(const GridFunction& u, Offset offset, int k)
{
    if (k < 1) {
        throw std::invalid_argument("k_difference: k must be >= 1");
    }
    GridFunction d = shift(u, offset) - u;
    for (int n = 1; n < k; ++n) {
        d = shift(d, offset) - d;
    }
    return d;
}

inline GridFunction k_difference(const GridFunction& u, std::span<const std::ptrdiff_t> offset, int k)
{
    return k_difference(u, make_offset(u.domain(), offset), k);
}

/// Cells that can be padded around u so that every k-th difference along
/// `offset` vanishes outside the padded box.
inline std::array<std::size_t, 2> difference_support_padding(Offset offset, int k)
{
    return {static_cast<std::size_t>(std::llabs(offset[0]) * k), static_cast<std::size_t>(std::llabs(offset[1]) * k)};
}

/// Pointwise clamp to [-level, level].
inline GridFunction truncate(const GridFunction& u, double level)
{
    if (!(level > 0.0)) {
        throw std::invalid_argument("truncate: level must be positive");
    }
    return u.map([level](double v) { return std::max(-level, std::min(v, level)); });
}

}  // namespace oscillab
