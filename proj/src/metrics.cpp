#include "rcd/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "rcd/error.hpp"
#include "rcd/risk.hpp"

namespace rcd {

namespace {

void require_nonempty(const Trace& trace) {
    if (trace.empty()) throw ValidationError("trace must be nonempty");
}

// Fired-at-threshold count on a sorted ascending score array.
std::size_t fired_count(const std::vector<double>& sorted_scores, double tau) {
    return static_cast<std::size_t>(
        sorted_scores.end() - std::lower_bound(sorted_scores.begin(), sorted_scores.end(), tau));
}

// Threshold-independent pieces of the sweep, computed in one pass over the
// trace. Score arrays are sorted so per-threshold counts are binary searches.
struct SweepScratch {
    std::size_t n = 0;
    std::size_t n_pos = 0;
    std::size_t n_ec_miss = 0;
    std::size_t n_ec_miss_pos = 0;
    std::size_t n_ood_miss = 0; // every monitor overrun is also an EC miss

    std::vector<double> ec_scores_pos, ec_scores_neg;   // EC no-miss samples
    std::vector<double> ood_scores_id, ood_scores_ood;  // monitor no-miss samples
    std::vector<double> ood_scores_id_emiss, ood_scores_ood_emiss; // EC-missed, monitor finished

    SweepScratch(const Trace& trace, double period_ms) {
        n = trace.size();
        for (const SampleRecord& s : trace.samples) {
            const PeriodOutcome o = simulate_period(s.ood_time_ms, s.ec_time_ms, period_ms);
            if (s.has_object) ++n_pos;
            if (o.ec_miss) {
                ++n_ec_miss;
                if (s.has_object) ++n_ec_miss_pos;
            } else {
                (s.has_object ? ec_scores_pos : ec_scores_neg).push_back(s.ec_score);
            }
            if (o.ood_miss) {
                ++n_ood_miss;
            } else {
                (s.is_ood ? ood_scores_ood : ood_scores_id).push_back(s.ood_score);
                if (o.ec_miss) {
                    (s.is_ood ? ood_scores_ood_emiss : ood_scores_id_emiss).push_back(s.ood_score);
                }
            }
        }
        std::sort(ec_scores_pos.begin(), ec_scores_pos.end());
        std::sort(ec_scores_neg.begin(), ec_scores_neg.end());
        std::sort(ood_scores_id.begin(), ood_scores_id.end());
        std::sort(ood_scores_ood.begin(), ood_scores_ood.end());
        std::sort(ood_scores_id_emiss.begin(), ood_scores_id_emiss.end());
        std::sort(ood_scores_ood_emiss.begin(), ood_scores_ood_emiss.end());
    }

    EventProbabilities event_probs(double tau_ec, double tau_ood) const {
        const double dn = static_cast<double>(n);
        EventProbabilities ep;

        const std::size_t ec_fired_neg = fired_count(ec_scores_neg, tau_ec);
        const std::size_t ec_fired_pos = fired_count(ec_scores_pos, tau_ec);
        ep.ec_fp = static_cast<double>(ec_fired_neg) / dn;
        ep.ec_tn = static_cast<double>(ec_scores_neg.size() - ec_fired_neg) / dn;
        ep.ec_tp = static_cast<double>(ec_fired_pos) / dn;
        ep.ec_fn = static_cast<double>(ec_scores_pos.size() - ec_fired_pos) / dn;
        ep.ec_miss = static_cast<double>(n_ec_miss) / dn;

        const std::size_t ood_fired_id = fired_count(ood_scores_id, tau_ood);
        const std::size_t ood_fired_ood = fired_count(ood_scores_ood, tau_ood);
        ep.ood_fp = static_cast<double>(ood_fired_id) / dn;
        ep.ood_tn = static_cast<double>(ood_scores_id.size() - ood_fired_id) / dn;
        ep.ood_tp = static_cast<double>(ood_fired_ood) / dn;
        ep.ood_fn = static_cast<double>(ood_scores_ood.size() - ood_fired_ood) / dn;
        ep.ood_miss = static_cast<double>(n_ood_miss) / dn;

        if (n_ec_miss > 0) {
            const double dm = static_cast<double>(n_ec_miss);
            const std::size_t fired_id_e = fired_count(ood_scores_id_emiss, tau_ood);
            const std::size_t fired_ood_e = fired_count(ood_scores_ood_emiss, tau_ood);
            ep.ood_fp_given_ec_miss = static_cast<double>(fired_id_e) / dm;
            ep.ood_tn_given_ec_miss =
                static_cast<double>(ood_scores_id_emiss.size() - fired_id_e) / dm;
            ep.ood_tp_given_ec_miss = static_cast<double>(fired_ood_e) / dm;
            ep.ood_fn_given_ec_miss =
                static_cast<double>(ood_scores_ood_emiss.size() - fired_ood_e) / dm;
            ep.ood_miss_given_ec_miss = static_cast<double>(n_ood_miss) / dm;
        }

        ep.p_pos = static_cast<double>(n_pos) / dn;
        ep.ec_miss_given_pos =
            n_pos > 0 ? static_cast<double>(n_ec_miss_pos) / static_cast<double>(n_pos) : 0.0;
        return ep;
    }
};

std::vector<double> midpoint_levels(std::vector<double> scores, std::size_t cap) {
    std::sort(scores.begin(), scores.end());
    scores.erase(std::unique(scores.begin(), scores.end()), scores.end());
    std::vector<double> levels;
    levels.push_back(0.0);
    for (std::size_t i = 0; i + 1 < scores.size(); ++i) {
        levels.push_back(0.5 * (scores[i] + scores[i + 1]));
    }
    levels.push_back(1.0);
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    if (cap >= 2 && levels.size() > cap) {
        std::vector<double> sub;
        sub.reserve(cap);
        const double step = static_cast<double>(levels.size() - 1) / static_cast<double>(cap - 1);
        for (std::size_t i = 0; i < cap; ++i) {
            sub.push_back(levels[static_cast<std::size_t>(std::llround(i * step))]);
        }
        sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
        return sub;
    }
    return levels;
}

} // namespace

double fp_m(const Trace& trace, double tau_ec) {
    require_nonempty(trace);
    std::size_t hits = 0;
    for (const SampleRecord& s : trace.samples) {
        if (s.ec_score >= tau_ec && !s.has_object) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(trace.size());
}

double fn_m(const Trace& trace, double tau_ec) {
    require_nonempty(trace);
    std::size_t hits = 0;
    for (const SampleRecord& s : trace.samples) {
        if (s.ec_score < tau_ec && s.has_object) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(trace.size());
}

EcOutcome classify_ec(const SampleRecord& s, double tau_ec, double period_ms) {
    const PeriodOutcome o = simulate_period(s.ood_time_ms, s.ec_time_ms, period_ms);
    if (o.ec_miss) return EcOutcome::DeadlineMiss;
    const bool fired = s.ec_score >= tau_ec;
    if (fired) return s.has_object ? EcOutcome::TruePositive : EcOutcome::FalsePositive;
    return s.has_object ? EcOutcome::FalseNegative : EcOutcome::TrueNegative;
}

OodOutcome classify_ood(const SampleRecord& s, double tau_ood, double period_ms) {
    const PeriodOutcome o = simulate_period(s.ood_time_ms, s.ec_time_ms, period_ms);
    if (o.ood_miss) return OodOutcome::DeadlineMiss;
    const bool fired = s.ood_score >= tau_ood;
    if (fired) return s.is_ood ? OodOutcome::TruePositive : OodOutcome::FalsePositive;
    return s.is_ood ? OodOutcome::FalseNegative : OodOutcome::TrueNegative;
}

EventProbabilities estimate_event_probs(const Trace& trace, Thresholds t, const DeadlineConfig& d) {
    require_nonempty(trace);
    d.validate();
    const SweepScratch scratch(trace, d.period_ms);
    EventProbabilities ep = scratch.event_probs(t.ec, t.ood);
    ep.validate();
    return ep;
}

TopEventProbs empirical_event_rates(const Trace& trace, Thresholds t, const DeadlineConfig& d) {
    require_nonempty(trace);
    d.validate();
    std::size_t e0 = 0;
    std::size_t e1 = 0;
    for (const SampleRecord& s : trace.samples) {
        const EcOutcome ec = classify_ec(s, t.ec, d.period_ms);
        const OodOutcome ood = classify_ood(s, t.ood, d.period_ms);
        const bool ood_silent = ood == OodOutcome::FalseNegative || ood == OodOutcome::TrueNegative ||
                                ood == OodOutcome::DeadlineMiss;
        const bool ec_silent_on_hazard =
            ec == EcOutcome::FalseNegative || (ec == EcOutcome::DeadlineMiss && s.has_object);
        if (ood_silent && ec_silent_on_hazard) ++e0;
        const bool ood_fired = ood == OodOutcome::FalsePositive || ood == OodOutcome::TruePositive;
        if ((ood_fired && !s.has_object) || ec == EcOutcome::FalsePositive) ++e1;
    }
    const double dn = static_cast<double>(trace.size());
    return {static_cast<double>(e0) / dn, static_cast<double>(e1) / dn};
}

SweepGrid SweepGrid::from_trace_midpoints(const Trace& trace, std::size_t cap) {
    require_nonempty(trace);
    std::vector<double> ec_scores, ood_scores;
    ec_scores.reserve(trace.size());
    ood_scores.reserve(trace.size());
    for (const SampleRecord& s : trace.samples) {
        ec_scores.push_back(s.ec_score);
        ood_scores.push_back(s.ood_score);
    }
    SweepGrid g;
    g.ec_levels = midpoint_levels(std::move(ec_scores), cap);
    g.ood_levels = midpoint_levels(std::move(ood_scores), cap);
    return g;
}

void SweepGrid::validate() const {
    if (ec_levels.empty() || ood_levels.empty()) {
        throw ValidationError("sweep grid must be nonempty on both axes");
    }
}

SweepResult threshold_sweep(const Trace& trace, const DeadlineConfig& d, const Severities& sev,
                            const SweepGrid& grid) {
    require_nonempty(trace);
    d.validate();
    sev.validate();
    grid.validate();

    const SweepScratch scratch(trace, d.period_ms);
    SweepResult result;
    result.curve.reserve(grid.ec_levels.size() * grid.ood_levels.size());
    bool have_best = false;
    for (double tau_ec : grid.ec_levels) {
        for (double tau_ood : grid.ood_levels) {
            const EventProbabilities ep = scratch.event_probs(tau_ec, tau_ood);
            const ClampedProbability e0 = modified_failure_prob_e0(ep);
            const ClampedProbability e1 = modified_failure_prob_e1(ep);
            const RiskReport report = total_risk(e0.value, e1.value, sev);
            result.curve.push_back({{tau_ec, tau_ood}, report.risk});
            const bool better =
                !have_best || report.risk < result.best_risk ||
                (report.risk == result.best_risk &&
                 (tau_ec > result.best.ec ||
                  (tau_ec == result.best.ec && tau_ood > result.best.ood)));
            if (better) {
                have_best = true;
                result.best = {tau_ec, tau_ood};
                result.best_risk = report.risk;
                result.best_p_e0 = e0.value;
                result.best_p_e1 = e1.value;
            }
        }
    }
    return result;
}

} // namespace rcd
