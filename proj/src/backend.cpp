#include "rcd/backend.hpp"

#include <algorithm>
#include <cmath>

#include "rcd/error.hpp"
#include "rcd/rng.hpp"

namespace rcd {

std::string DesignPoint::id() const {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "ec%d_t%.4f_%s%d_t%.4f", ec_size, ec_threshold,
                  to_string(ood_arch).c_str(), ood_size, ood_threshold);
    return buf;
}

void DesignPoint::validate(const DesignSpace& space) const {
    space.validate();
    if (ec_size < space.ec_size_lo || ec_size > space.ec_size_hi) {
        throw ValidationError("design point: ec_size " + std::to_string(ec_size) +
                              " outside configured bounds");
    }
    if (ood_size < space.ood_size_lo || ood_size > space.ood_size_hi) {
        throw ValidationError("design point: ood_size " + std::to_string(ood_size) +
                              " outside configured bounds");
    }
    if (!(ec_threshold >= 0.0 && ec_threshold <= 1.0)) {
        throw ValidationError("design point: ec_threshold must lie in [0,1]");
    }
    if (!(ood_threshold >= 0.0 && ood_threshold <= 1.0)) {
        throw ValidationError("design point: ood_threshold must lie in [0,1]");
    }
    if (std::find(space.arch_levels.begin(), space.arch_levels.end(), ood_arch) ==
        space.arch_levels.end()) {
        throw ValidationError("design point: architecture not among the configured levels");
    }
}

void ScoreCurve::validate(const std::string& path) const {
    if (!(d_max >= 0.0 && d_max <= 1.0)) throw ValidationError(path + ".d_max must lie in [0,1]");
    if (!(s_half > 0.0)) throw ValidationError(path + ".s_half must be positive");
}

void LatencyCurve::validate(const std::string& path) const {
    if (!(base_ms > 0.0)) throw ValidationError(path + ".base_ms must be positive");
    if (!(quad_ms_per_px2 >= 0.0)) throw ValidationError(path + ".quad_ms_per_px2 must be >= 0");
    if (!(sigma >= 0.0)) throw ValidationError(path + ".sigma must be >= 0");
}

void BackendCoefficients::validate() const {
    ec_score.validate("backend.ec_score");
    ood_score_beta_vae.validate("backend.ood_score_beta_vae");
    ood_score_reconstruction.validate("backend.ood_score_reconstruction");
    ec_latency.validate("backend.ec_latency");
    ood_latency.validate("backend.ood_latency");
    if (!(ec_sigma_train >= 0.0)) throw ValidationError("backend.ec_sigma_train must be >= 0");
    if (!(ood_sigma_train >= 0.0)) throw ValidationError("backend.ood_sigma_train must be >= 0");
    if (!(ec_pos_time_factor >= 0.0)) throw ValidationError("backend.ec_pos_time_factor must be >= 0");
    if (!(ood_reconstruction_time_factor >= 1.0)) {
        throw ValidationError("backend.ood_reconstruction_time_factor must be >= 1");
    }
}

void Scenario::validate() const {
    if (!(p_pos >= 0.0 && p_pos <= 1.0)) throw ValidationError("scenario.p_pos must lie in [0,1]");
    if (!(ood_fraction >= 0.0 && ood_fraction <= 1.0)) {
        throw ValidationError("scenario.ood_fraction must lie in [0,1]");
    }
    if (n_samples < 100) throw ValidationError("scenario.n_samples must be >= 100");
    if (!(period_ms > 0.0)) throw ValidationError("scenario.period_ms must be positive");
    severities.validate();
    backend.validate();
    space.validate();
}

TrainedCurves trained_curves(const DesignPoint& dp, const Scenario& sc, std::uint64_t train_seed) {
    SplitMix64 train_rng(derive_seed(derive_seed(sc.master_seed, "train"), train_seed));
    const ScoreCurve& ood_curve = dp.ood_arch == OodArch::BetaVae
                                      ? sc.backend.ood_score_beta_vae
                                      : sc.backend.ood_score_reconstruction;
    TrainedCurves tc;
    tc.d_ec = std::clamp(sc.backend.ec_score(dp.ec_size) + sc.backend.ec_sigma_train * train_rng.normal(),
                         0.0, 0.999);
    tc.d_ood = std::clamp(ood_curve(dp.ood_size) + sc.backend.ood_sigma_train * train_rng.normal(),
                          0.0, 0.999);
    return tc;
}

Trace generate_trace(const DesignPoint& dp, const Scenario& sc, std::uint64_t train_seed) {
    sc.validate();
    dp.validate(sc.space);

    const TrainedCurves tc = trained_curves(dp, sc, train_seed);
    const double ec_median = sc.backend.ec_latency.median(dp.ec_size);
    const double ood_median = sc.backend.ood_latency.median(dp.ood_size) *
                              (dp.ood_arch == OodArch::Reconstruction
                                   ? sc.backend.ood_reconstruction_time_factor
                                   : 1.0);

    const std::uint64_t label_root = derive_seed(sc.master_seed, "labels");
    const std::uint64_t draw_root = derive_seed(derive_seed(sc.master_seed, "draws"), train_seed);

    Trace trace;
    trace.meta = {sc.id, train_seed, dp.id()};
    trace.samples.reserve(sc.n_samples);
    for (std::size_t i = 0; i < sc.n_samples; ++i) {
        SplitMix64 label_rng(derive_seed(label_root, i));
        SplitMix64 draw_rng(derive_seed(draw_root, i));

        SampleRecord s;
        s.has_object = label_rng.bernoulli(sc.p_pos);
        s.is_ood = label_rng.bernoulli(sc.ood_fraction);
        s.ec_score = draw_rng.beta_mean(s.has_object ? 0.5 + tc.d_ec / 2.0 : 0.5 - tc.d_ec / 2.0,
                                        sc.backend.ec_kappa);
        s.ood_score = draw_rng.beta_mean(s.is_ood ? 0.5 + tc.d_ood / 2.0 : 0.5 - tc.d_ood / 2.0,
                                         sc.backend.ood_kappa);
        s.ec_time_ms = draw_rng.lognormal_median(
            ec_median * (s.has_object ? 1.0 + sc.backend.ec_pos_time_factor : 1.0),
            sc.backend.ec_latency.sigma);
        s.ood_time_ms = draw_rng.lognormal_median(ood_median, sc.backend.ood_latency.sigma);
        trace.samples.push_back(s);
    }
    return trace;
}

} // namespace rcd
