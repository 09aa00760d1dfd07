#pragma once

#include <cstdint>
#include <string>

#include "rcd/design_space.hpp"
#include "rcd/events.hpp"
#include "rcd/trace.hpp"

namespace rcd {

// One candidate design: structural hyperparameters plus decision thresholds.
struct DesignPoint {
    int ec_size = 192;           // EC input edge, pixels
    double ec_threshold = 0.5;
    int ood_size = 64;           // monitor input edge, pixels
    double ood_threshold = 0.5;
    OodArch ood_arch = OodArch::BetaVae;

    std::string id() const;
    void validate(const DesignSpace& space) const;
};

// Saturating accuracy curve: d(s) = d_max * s / (s + s_half), monotone
// nondecreasing in the input size.
struct ScoreCurve {
    double d_max = 0.9;
    double s_half = 128.0;

    double operator()(double size) const { return d_max * size / (size + s_half); }
    void validate(const std::string& path) const;
};

// Latency median grows with pixel count: median(s) = base + quad * s^2.
struct LatencyCurve {
    double base_ms = 10.0;
    double quad_ms_per_px2 = 1e-3;
    double sigma = 0.1; // lognormal shape; 0 degenerates to the median

    double median(double size) const { return base_ms + quad_ms_per_px2 * size * size; }
    void validate(const std::string& path) const;
};

struct BackendCoefficients {
    ScoreCurve ec_score;
    double ec_kappa = 6.0;          // Beta concentration of EC scores (<= 0: point mass)
    double ec_sigma_train = 0.02;   // retrain jitter on EC discriminability

    ScoreCurve ood_score_beta_vae;
    ScoreCurve ood_score_reconstruction;
    double ood_kappa = 6.0;
    double ood_sigma_train = 0.02;

    LatencyCurve ec_latency;
    double ec_pos_time_factor = 0.15; // extra post-processing on positive samples

    LatencyCurve ood_latency;
    double ood_reconstruction_time_factor = 1.6; // decoder pass

    void validate() const;
};

// Everything a run needs besides the candidate itself: dataset composition,
// deadline, severities, backend coefficients and the design space.
struct Scenario {
    std::string id = "default";
    double p_pos = 0.5;
    double ood_fraction = 0.3;
    std::size_t n_samples = 1000;
    double period_ms = 250.0;
    Severities severities;
    BackendCoefficients backend;
    DesignSpace space;
    std::uint64_t master_seed = 1;

    void validate() const;
};

// Effective per-training-run curve parameters: the deterministic size curves
// jittered by the training seed (retraining is stochastic; response times are
// not retrained, only weights are).
struct TrainedCurves {
    double d_ec = 0.0;  // effective EC discriminability in [0, 1)
    double d_ood = 0.0; // effective monitor discriminability in [0, 1)
};

TrainedCurves trained_curves(const DesignPoint& dp, const Scenario& sc, std::uint64_t train_seed);

// Deterministic stand-in for "train both networks and measure them": maps a
// design point and training seed to a full per-sample trace. Labels depend
// only on (scenario, sample index), so candidates are compared on a common
// dataset; scores and times depend on the design and training seed.
Trace generate_trace(const DesignPoint& dp, const Scenario& sc, std::uint64_t train_seed);

} // namespace rcd
