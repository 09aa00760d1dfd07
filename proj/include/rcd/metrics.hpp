#pragma once

#include <cstddef>
#include <vector>

#include "rcd/events.hpp"
#include "rcd/timing.hpp"
#include "rcd/trace.hpp"

namespace rcd {

struct Thresholds {
    double ec = 0.5;
    double ood = 0.5;
};

// Fraction of the WHOLE dataset on which the EC fires with no object present.
// The denominator is |trace|, not the negative count.
double fp_m(const Trace& trace, double tau_ec);

// Fraction of the whole dataset on which an object is present but the EC
// stays silent.
double fn_m(const Trace& trace, double tau_ec);

// Per-sample outcome classification under one threshold pair: deadline misses
// come from replaying both response times through simulate_period, functional
// outcomes from comparing scores against the thresholds.
EcOutcome classify_ec(const SampleRecord& s, double tau_ec, double period_ms);
OodOutcome classify_ood(const SampleRecord& s, double tau_ood, double period_ms);

// Empirical marginals, conditionals given an EC miss, p_pos and
// P(miss | pos); satisfies the EventProbabilities invariants by construction.
EventProbabilities estimate_event_probs(const Trace& trace, Thresholds t, const DeadlineConfig& d);

// Direct per-sample estimator of the two composite failure events, bypassing
// the closed forms entirely.
TopEventProbs empirical_event_rates(const Trace& trace, Thresholds t, const DeadlineConfig& d);

// Threshold levels to evaluate per axis.
struct SweepGrid {
    std::vector<double> ec_levels;
    std::vector<double> ood_levels;

    // Default grid: 0, every midpoint between consecutive unique scores, and
    // 1 -- the exact sweep -- uniformly subsampled per axis if it would
    // exceed `cap` levels.
    static SweepGrid from_trace_midpoints(const Trace& trace, std::size_t cap = 512);

    void validate() const;
};

struct SweepPoint {
    Thresholds t;
    double risk = 0.0;
};

struct SweepResult {
    Thresholds best;
    double best_risk = 0.0;
    double best_p_e0 = 0.0;
    double best_p_e1 = 0.0;
    std::vector<SweepPoint> curve; // ec-major, both axes ascending
};

// Evaluates risk (event estimation -> closed forms -> severity combination)
// at every grid point. Timing outcomes are computed once and shared across
// the grid. Ties break toward higher tau_ec, then higher tau_ood.
SweepResult threshold_sweep(const Trace& trace, const DeadlineConfig& d, const Severities& sev,
                            const SweepGrid& grid);

} // namespace rcd
