#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "kernel.hpp"
#include "parallel.hpp"

namespace oscillab {

struct MollifyResult {
    GridFunction value;
    bool under_resolved = false;  // eps below one cell spacing
};

/// Discrete convolution with the kernel sampled at cell-center offsets and
/// renormalized to unit sum. Cells outside the box read as zero.
inline MollifyResult mollify(const GridFunction& u, const KernelFamily& kernel, double eps)
{
    if (!(eps > 0.0)) {
        throw std::invalid_argument("mollify: eps must be positive");
    }
    const auto& d = u.domain();
    if (kernel.dim() != d.dim) {
        throw std::invalid_argument("mollify: kernel dimension does not match grid");
    }
    const double h = d.spacing;
    const auto reach = static_cast<std::ptrdiff_t>(std::floor(kernel.effective_radius(eps) / h));
    std::vector<Offset> taps;
    std::vector<double> weights;
    const std::ptrdiff_t reach1 = d.dim == 2 ? reach : 0;
    for (std::ptrdiff_t a = -reach; a <= reach; ++a) {
        for (std::ptrdiff_t b = -reach1; b <= reach1; ++b) {
            const double r = d.length({a, b});
            const double w = kernel.profile(r, eps);
            if (w > 0.0) {
                taps.push_back({a, b});
                weights.push_back(w);
            }
        }
    }
    const double total = pairwise_sum(weights);
    for (double& w : weights) {
        w /= total;
    }
    auto out = parallel_map<double>(d.size(), [&](std::size_t i) {
        const auto c = d.unflat(i);
        double s = 0.0;
        for (std::size_t t = 0; t < taps.size(); ++t) {
            s += weights[t] * u.at({c[0] - taps[t][0], c[1] - taps[t][1]});
        }
        return s;
    });
    return {GridFunction(d, std::move(out)), eps < h};
}

}  // namespace oscillab
