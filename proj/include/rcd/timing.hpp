#pragma once

#include <cstdint>
#include <vector>

#include "rcd/rng.hpp"

namespace rcd {

// Response-time distribution, parameters in milliseconds. Lognormal is
// parameterized by its median so latency curves can be stated directly in ms;
// sigma = 0 degenerates to a constant at the median.
struct DistributionSpec {
    enum class Kind { Constant, Uniform, Lognormal, Empirical };

    Kind kind = Kind::Constant;
    double a = 1.0; // constant: value; uniform: lower bound; lognormal: median
    double b = 0.0; // uniform: upper bound; lognormal: sigma
    std::vector<double> samples; // empirical only

    static DistributionSpec constant(double value);
    static DistributionSpec uniform(double lo, double hi);
    static DistributionSpec lognormal(double median, double sigma);
    static DistributionSpec empirical(std::vector<double> samples);

    void validate() const;
    double sample(SplitMix64& rng) const;
};

// Response times of the two jobs sharing the resource. EC time is conditioned
// on the ground-truth label (post-processing cost varies with scene content);
// the monitor's is not.
struct ResponseTimeModel {
    DistributionSpec ood_dist;
    DistributionSpec ec_dist_pos;
    DistributionSpec ec_dist_neg;

    void validate() const;
};

// The deadline equals the sampling period.
struct DeadlineConfig {
    double period_ms = 250.0;

    void validate() const;
};

// One period: monitor dispatched first, EC after it, both on one blocking
// resource. A monitor overrun means the EC never starts.
struct PeriodOutcome {
    bool ood_miss = false;
    bool ec_miss = false;
    double busy_ms = 0.0;
};

struct UtilizationReport {
    double avg_utilization = 0.0;     // mean busy fraction per period, in (0,1]
    double ec_miss_rate = 0.0;        // P(EC misses its deadline)
    double ood_miss_rate = 0.0;       // P(monitor misses its deadline)
    double ec_miss_given_pos = 0.0;   // P(EC miss | positive ground truth)
};

// Work past the deadline is discarded and execution terminated, so occupancy
// is capped at the period.
PeriodOutcome simulate_period(double t_ood_ms, double t_ec_ms, double period_ms);

// Draws n periods (label with probability p_pos, times from the model),
// deterministic given the seed.
UtilizationReport estimate_timing(const ResponseTimeModel& model, const DeadlineConfig& deadline,
                                  double p_pos, std::size_t n, std::uint64_t seed);

} // namespace rcd
