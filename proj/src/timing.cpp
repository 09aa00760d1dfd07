#include "rcd/timing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rcd/error.hpp"

namespace rcd {

DistributionSpec DistributionSpec::constant(double value) {
    DistributionSpec d;
    d.kind = Kind::Constant;
    d.a = value;
    d.validate();
    return d;
}

DistributionSpec DistributionSpec::uniform(double lo, double hi) {
    DistributionSpec d;
    d.kind = Kind::Uniform;
    d.a = lo;
    d.b = hi;
    d.validate();
    return d;
}

DistributionSpec DistributionSpec::lognormal(double median, double sigma) {
    DistributionSpec d;
    d.kind = Kind::Lognormal;
    d.a = median;
    d.b = sigma;
    d.validate();
    return d;
}

DistributionSpec DistributionSpec::empirical(std::vector<double> samples) {
    DistributionSpec d;
    d.kind = Kind::Empirical;
    d.samples = std::move(samples);
    d.validate();
    return d;
}

void DistributionSpec::validate() const {
    switch (kind) {
        case Kind::Constant:
            if (!(a > 0.0) || !std::isfinite(a)) {
                throw ValidationError("constant distribution requires a positive value");
            }
            break;
        case Kind::Uniform:
            if (!(a >= 0.0) || !(b > a) || !std::isfinite(b)) {
                throw ValidationError("uniform distribution requires 0 <= lo < hi");
            }
            break;
        case Kind::Lognormal:
            if (!(a > 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
                throw ValidationError("lognormal distribution requires median > 0 and sigma >= 0");
            }
            break;
        case Kind::Empirical:
            if (samples.empty()) throw ValidationError("empirical distribution requires samples");
            for (double s : samples) {
                if (!(s > 0.0) || !std::isfinite(s)) {
                    throw ValidationError("empirical samples must be positive and finite");
                }
            }
            break;
    }
}

double DistributionSpec::sample(SplitMix64& rng) const {
    switch (kind) {
        case Kind::Constant: return a;
        case Kind::Uniform: return a + (b - a) * rng.next_unit(); // draws in (lo, hi]
        case Kind::Lognormal: return rng.lognormal_median(a, b);
        case Kind::Empirical: return samples[rng.next_below(samples.size())];
    }
    throw NumericalError("unreachable distribution kind");
}

void ResponseTimeModel::validate() const {
    ood_dist.validate();
    ec_dist_pos.validate();
    ec_dist_neg.validate();
}

void DeadlineConfig::validate() const {
    if (!(period_ms > 0.0) || !std::isfinite(period_ms)) {
        throw ValidationError("period_ms must be positive");
    }
}

PeriodOutcome simulate_period(double t_ood_ms, double t_ec_ms, double period_ms) {
    if (!(t_ood_ms > 0.0) || !(t_ec_ms > 0.0) || !(period_ms > 0.0)) {
        throw ValidationError("simulate_period requires strictly positive times and period");
    }
    PeriodOutcome out;
    out.ood_miss = t_ood_ms > period_ms;
    out.ec_miss = out.ood_miss || (t_ood_ms + t_ec_ms > period_ms);
    out.busy_ms = std::min(t_ood_ms + t_ec_ms, period_ms);
    return out;
}

UtilizationReport estimate_timing(const ResponseTimeModel& model, const DeadlineConfig& deadline,
                                  double p_pos, std::size_t n, std::uint64_t seed) {
    model.validate();
    deadline.validate();
    if (n == 0) throw ValidationError("estimate_timing requires n >= 1");
    if (!(p_pos >= 0.0 && p_pos <= 1.0)) throw ValidationError("p_pos must lie in [0,1]");

    std::size_t ec_misses = 0;
    std::size_t ood_misses = 0;
    std::size_t positives = 0;
    std::size_t ec_misses_pos = 0;
    double busy_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        SplitMix64 sub(derive_seed(seed, i));
        const bool pos = sub.bernoulli(p_pos);
        const double t_ood = model.ood_dist.sample(sub);
        const double t_ec = (pos ? model.ec_dist_pos : model.ec_dist_neg).sample(sub);
        const PeriodOutcome o = simulate_period(t_ood, t_ec, deadline.period_ms);
        if (o.ec_miss) ++ec_misses;
        if (o.ood_miss) ++ood_misses;
        if (pos) {
            ++positives;
            if (o.ec_miss) ++ec_misses_pos;
        }
        busy_sum += o.busy_ms;
    }

    UtilizationReport r;
    r.avg_utilization = busy_sum / (static_cast<double>(n) * deadline.period_ms);
    r.ec_miss_rate = static_cast<double>(ec_misses) / static_cast<double>(n);
    r.ood_miss_rate = static_cast<double>(ood_misses) / static_cast<double>(n);
    r.ec_miss_given_pos =
        positives > 0 ? static_cast<double>(ec_misses_pos) / static_cast<double>(positives) : 0.0;
    return r;
}

} // namespace rcd
