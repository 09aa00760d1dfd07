#pragma once

#include <string>
#include <vector>

namespace rcd {

// Monitor architecture choices. The latent-space detector runs encoder-only;
// the reconstruction detector pays for a full decoder pass as well.
enum class OodArch : int {
    BetaVae = 0,
    Reconstruction = 1,
};

std::string to_string(OodArch arch);
OodArch ood_arch_from_string(const std::string& s);

// Numeric design box (EC input edge x monitor input edge, in pixels) plus the
// categorical architecture levels, tiled into n_partitions equal sub-boxes.
struct DesignSpace {
    double ec_size_lo = 64.0;
    double ec_size_hi = 480.0;
    double ood_size_lo = 8.0;
    double ood_size_hi = 224.0;
    std::vector<OodArch> arch_levels = {OodArch::BetaVae, OodArch::Reconstruction};
    int n_partitions = 4;

    struct Partition {
        int id = 0;
        double ec_lo = 0.0, ec_hi = 0.0;
        double ood_lo = 0.0, ood_hi = 0.0;
    };

    void validate() const;

    // n_partitions = nx * ny with nx the smallest divisor >= sqrt(n); nx
    // splits the EC axis. Sub-boxes are equal-sized, non-overlapping and
    // cover the box exactly.
    std::vector<Partition> partitions() const;

    // Index of the unique partition containing the point (half-open tiles,
    // upper edges belong to the last tile).
    int partition_of(double ec_size, double ood_size) const;

    // Map pixels to the unit square and back (whole-space normalization).
    double norm_ec(double ec_size) const { return (ec_size - ec_size_lo) / (ec_size_hi - ec_size_lo); }
    double norm_ood(double ood_size) const { return (ood_size - ood_size_lo) / (ood_size_hi - ood_size_lo); }
    double denorm_ec(double u) const { return ec_size_lo + u * (ec_size_hi - ec_size_lo); }
    double denorm_ood(double u) const { return ood_size_lo + u * (ood_size_hi - ood_size_lo); }
};

} // namespace rcd
