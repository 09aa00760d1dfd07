#pragma once

#include <array>

namespace rcd {

// Outcome of one essential-component (EC) execution on a sample. Exactly one
// outcome occurs per sample; a deadline miss discards any functional result.
enum class EcOutcome : int {
    FalsePositive = 0,
    TruePositive = 1,
    FalseNegative = 2,
    TrueNegative = 3,
    DeadlineMiss = 4,
};

// Outcome of one OOD-monitor execution on a sample.
enum class OodOutcome : int {
    FalsePositive = 0,
    TruePositive = 1,
    FalseNegative = 2,
    TrueNegative = 3,
    DeadlineMiss = 4,
};

inline constexpr std::array<EcOutcome, 5> kEcOutcomes = {
    EcOutcome::FalsePositive, EcOutcome::TruePositive, EcOutcome::FalseNegative,
    EcOutcome::TrueNegative, EcOutcome::DeadlineMiss};

inline constexpr std::array<OodOutcome, 5> kOodOutcomes = {
    OodOutcome::FalsePositive, OodOutcome::TruePositive, OodOutcome::FalseNegative,
    OodOutcome::TrueNegative, OodOutcome::DeadlineMiss};

// Marginal and conditional event probabilities for one (EC, monitor) design.
// The five EC outcomes are mutually exclusive and exhaustive, as are the five
// monitor outcomes. Conditionals given an EC deadline miss follow the
// convention that they are all zero when ec_miss is zero, so the downstream
// closed forms stay evaluable in the zero-miss limit.
struct EventProbabilities {
    double ec_fp = 0.0;   // EC false positive
    double ec_tp = 0.0;   // EC true positive
    double ec_fn = 0.0;   // EC false negative
    double ec_tn = 0.0;   // EC true negative
    double ec_miss = 0.0; // EC deadline miss

    double ood_fp = 0.0;
    double ood_tp = 0.0;
    double ood_fn = 0.0;
    double ood_tn = 0.0;
    double ood_miss = 0.0;

    double ood_fp_given_ec_miss = 0.0;
    double ood_tp_given_ec_miss = 0.0;
    double ood_fn_given_ec_miss = 0.0;
    double ood_tn_given_ec_miss = 0.0;
    double ood_miss_given_ec_miss = 0.0;

    double p_pos = 0.0;               // P(ground truth is positive)
    double ec_miss_given_pos = 0.0;   // P(EC miss | positive ground truth)

    // Throws ValidationError naming the failed constraint.
    void validate() const;
};

// Severity weights for the two top-level failures: a missed hazard (no action
// when one was required) and a false alarm (action when none was required).
struct Severities {
    double e0 = 3.0; // missed hazard
    double e1 = 1.0; // false alarm

    void validate() const;
};

// Top-level failure probabilities combined into a scalar risk.
struct RiskReport {
    double p_e0 = 0.0;
    double p_e1 = 0.0;
    double risk = 0.0;
};

// Result of a closed-form probability that had to be clamped into [0, 1].
struct ClampedProbability {
    double value = 0.0;
    bool clamped = false;
};

struct TopEventProbs {
    double p_e0 = 0.0;
    double p_e1 = 0.0;
};

} // namespace rcd
