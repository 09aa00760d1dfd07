#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rcd/design_space.hpp"
#include "rcd/gp.hpp"

namespace rcd {

// Expected improvement for minimization: E[max(best - xi - Y, 0)] under
// Y ~ Normal(mean, variance). Closed form; variance = 0 degenerates to
// max(best - xi - mean, 0).
double expected_improvement(double mean, double variance, double best, double xi);

// Axis-aligned search box in normalized coordinates.
struct NumericBox {
    Eigen::Vector2d lo{0.0, 0.0};
    Eigen::Vector2d hi{1.0, 1.0};
};

struct AcquisitionSettings {
    double xi = 0.0;       // exploration offset
    int restarts = 12;     // random multi-starts for the ascent
    int max_iter = 60;     // conjugate-gradient iterations per start
};

// One surrogate per architecture level; a null model marks a level with no
// observations yet.
struct ArchSurrogate {
    OodArch arch = OodArch::BetaVae;
    const GPModel* model = nullptr;
};

struct Proposal {
    Eigen::Vector2d point{0.0, 0.0}; // normalized coordinates
    OodArch arch = OodArch::BetaVae;
    double ei = 0.0;
};

// Maximizes EI over the box with conjugate-gradient ascent (finite-difference
// gradients, iterates clamped to the box) from `restarts` random starts, per
// architecture level; the best (point, level) wins. A level without a model
// is proposed outright at a random point to force exploration.
Proposal maximize_acquisition(const std::vector<ArchSurrogate>& surrogates, const NumericBox& box,
                              double incumbent_best, const AcquisitionSettings& settings,
                              std::uint64_t seed);

} // namespace rcd
