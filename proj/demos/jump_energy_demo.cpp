// Energy curves of a disk indicator: directional and kernel energies against
// their symbolic limits as eps shrinks.

#include <cstdio>

#include "oscillab/oscillab.hpp"

using namespace oscillab;

int main()
{
    configure_threads_from_env();
    const auto d = GridDomain::centered(2, 512, 1.0);
    const auto shape = JumpShape::disk2d(1.0, {0.0, 0.0}, 0.5);
    const RegionBox box{{-1.0, -1.0}, {1.0, 1.0}};
    const auto u = shape.sample(d);
    const auto mask = box.mask(d);
    const auto eps = geometric_schedule(0.2, 0.04, 4);
    const auto truth = ground_truth(shape, box, 2.0);

    const auto dir = directional_sweep(u, mask, {1.0, 0.0}, 2.0, eps);
    const auto ker = kernel_sweep(u, mask, KernelFamily(KernelKind::box, 2), 2.0, eps);
    std::printf("%10s %14s %14s\n", "eps", "directional", "kernel(box)");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        std::printf("%10.4f %14.6f %14.6f\n", eps[i], dir.energy[i], ker.energy[i]);
    }
    std::printf("%10s %14.6f %14.6f\n", "limit", dir.limit, ker.limit);
    std::printf("%10s %14.6f %14.6f\n", "exact", truth.directional, truth.kernel_limit());
    return 0;
}
