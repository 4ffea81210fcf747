#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "grid.hpp"

namespace oscillab {

/// Axis-aligned block of cells: `lo` is the first cell, `extent` the number
/// of cells along each axis (extent[1] == 1 for 1D grids).
struct CellBlock {
    CellIndex lo{0, 0};
    std::array<std::size_t, 2> extent{1, 1};

    /// Cube of edge `edge` cells with first cell `lo`.
    static CellBlock cube(const GridDomain& d, CellIndex lo, std::size_t edge)
    {
        return {lo, {edge, d.dim == 2 ? edge : 1}};
    }

    [[nodiscard]] std::size_t count() const { return extent[0] * extent[1]; }

    [[nodiscard]] bool inside(const GridDomain& d) const
    {
        return lo[0] >= 0 && lo[1] >= 0 && extent[0] >= 1 && extent[1] >= 1 &&
               static_cast<std::size_t>(lo[0]) + extent[0] <= d.cells[0] &&
               static_cast<std::size_t>(lo[1]) + extent[1] <= d.cells[1];
    }

    friend bool operator==(const CellBlock&, const CellBlock&) = default;
};

namespace detail {
// Unevaluated sum hi + lo (double-double); enough headroom that block sums
// next to prefixes 1e15 times larger keep full double precision.
struct DoubleDouble {
    double hi = 0.0;
    double lo = 0.0;
};

inline DoubleDouble dd_add(DoubleDouble a, DoubleDouble b)
{
    const double s = a.hi + b.hi;
    const double bb = s - a.hi;
    const double err = (a.hi - (s - bb)) + (b.hi - bb);
    const double lo = err + a.lo + b.lo;
    const double hi = s + lo;
    return {hi, lo - (hi - s)};
}

inline DoubleDouble dd_neg(DoubleDouble a) { return {-a.hi, -a.lo}; }
}  // namespace detail

/// Prefix sums of cell values with constant-time block sums.
///
/// Prefixes are kept in double-double so differencing two large prefixes
/// does not cancel away a small block sum.
class SummedAreaTable {
public:
    explicit SummedAreaTable(const GridFunction& u) : domain_(u.domain())
    {
        const std::size_t n0 = domain_.cells[0];
        const std::size_t n1 = domain_.cells[1];
        stride_ = n1 + 1;
        prefix_.assign((n0 + 1) * stride_, detail::DoubleDouble{});
        for (std::size_t i = 0; i < n0; ++i) {
            detail::DoubleDouble row;
            for (std::size_t j = 0; j < n1; ++j) {
                row = detail::dd_add(row, {u[i * n1 + j], 0.0});
                prefix_[(i + 1) * stride_ + (j + 1)] = detail::dd_add(prefix_[i * stride_ + (j + 1)], row);
            }
        }
    }

    [[nodiscard]] const GridDomain& domain() const { return domain_; }

    /// Sum of cell values over the block.
    [[nodiscard]] double box_sum(const CellBlock& b) const
    {
        if (!b.inside(domain_)) {
            throw std::invalid_argument("SummedAreaTable: block outside the domain");
        }
        const auto r0 = static_cast<std::size_t>(b.lo[0]);
        const auto c0 = static_cast<std::size_t>(b.lo[1]);
        const std::size_t r1 = r0 + b.extent[0];
        const std::size_t c1 = c0 + b.extent[1];
        using detail::dd_add;
        using detail::dd_neg;
        const auto s = dd_add(dd_add(prefix_[r1 * stride_ + c1], dd_neg(prefix_[r0 * stride_ + c1])),
                              dd_add(prefix_[r0 * stride_ + c0], dd_neg(prefix_[r1 * stride_ + c0])));
        return s.hi + s.lo;
    }

    /// Integral of the piecewise-constant interpolant over the block.
    [[nodiscard]] double box_integral(const CellBlock& b) const { return box_sum(b) * domain_.cell_volume(); }

private:
    GridDomain domain_;
    std::size_t stride_ = 0;
    std::vector<detail::DoubleDouble> prefix_;
};

}  // namespace oscillab
