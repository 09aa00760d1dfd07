#include "rcd/design_space.hpp"

#include <algorithm>
#include <cmath>

#include "rcd/error.hpp"

namespace rcd {

std::string to_string(OodArch arch) {
    switch (arch) {
        case OodArch::BetaVae: return "beta_vae";
        case OodArch::Reconstruction: return "reconstruction";
    }
    throw ValidationError("unknown OodArch value");
}

OodArch ood_arch_from_string(const std::string& s) {
    if (s == "beta_vae") return OodArch::BetaVae;
    if (s == "reconstruction") return OodArch::Reconstruction;
    throw ValidationError("unknown OOD architecture '" + s + "' (expected beta_vae or reconstruction)");
}

void DesignSpace::validate() const {
    if (!(ec_size_lo > 0.0) || !(ec_size_hi > ec_size_lo)) {
        throw ValidationError("design space: ec_size bounds must satisfy 0 < lo < hi");
    }
    if (!(ood_size_lo > 0.0) || !(ood_size_hi > ood_size_lo)) {
        throw ValidationError("design space: ood_size bounds must satisfy 0 < lo < hi");
    }
    if (arch_levels.empty()) throw ValidationError("design space: at least one architecture level");
    if (n_partitions < 1) throw ValidationError("design space: n_partitions must be >= 1");
}

namespace {

// Split count on the EC axis: smallest divisor of n that is >= sqrt(n).
int ec_axis_splits(int n) {
    for (int k = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))); k <= n; ++k) {
        if (n % k == 0) return k;
    }
    return n;
}

} // namespace

std::vector<DesignSpace::Partition> DesignSpace::partitions() const {
    validate();
    const int nx = ec_axis_splits(n_partitions);
    const int ny = n_partitions / nx;
    const double ec_w = (ec_size_hi - ec_size_lo) / nx;
    const double ood_w = (ood_size_hi - ood_size_lo) / ny;
    std::vector<Partition> out;
    out.reserve(static_cast<std::size_t>(n_partitions));
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            Partition p;
            p.id = iy * nx + ix;
            p.ec_lo = ec_size_lo + ix * ec_w;
            p.ec_hi = (ix == nx - 1) ? ec_size_hi : ec_size_lo + (ix + 1) * ec_w;
            p.ood_lo = ood_size_lo + iy * ood_w;
            p.ood_hi = (iy == ny - 1) ? ood_size_hi : ood_size_lo + (iy + 1) * ood_w;
            out.push_back(p);
        }
    }
    return out;
}

int DesignSpace::partition_of(double ec_size, double ood_size) const {
    validate();
    if (ec_size < ec_size_lo || ec_size > ec_size_hi || ood_size < ood_size_lo ||
        ood_size > ood_size_hi) {
        throw ValidationError("partition_of: point outside the design space");
    }
    const int nx = ec_axis_splits(n_partitions);
    const int ny = n_partitions / nx;
    const double ec_w = (ec_size_hi - ec_size_lo) / nx;
    const double ood_w = (ood_size_hi - ood_size_lo) / ny;
    int ix = std::min(nx - 1, static_cast<int>((ec_size - ec_size_lo) / ec_w));
    int iy = std::min(ny - 1, static_cast<int>((ood_size - ood_size_lo) / ood_w));
    return iy * nx + ix;
}

} // namespace rcd
