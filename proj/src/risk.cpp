#include "rcd/risk.hpp"

#include <string>

#include "rcd/error.hpp"

namespace rcd {

namespace {

ClampedProbability clamp_unit(double raw) {
    if (raw < 0.0) return {0.0, true};
    if (raw > 1.0) return {1.0, true};
    return {raw, false};
}

} // namespace

TopEventProbs baseline_failure_probs(const EventProbabilities& ep) {
    ep.validate();
    return {ep.ec_fn + ep.ec_miss, ep.ec_fp};
}

ClampedProbability modified_failure_prob_e0(const EventProbabilities& ep) {
    ep.validate();
    const double override_fail_given_miss =
        ep.ood_fn_given_ec_miss + ep.ood_tn_given_ec_miss + ep.ood_miss_given_ec_miss;
    const double raw =
        ep.ec_fn * (ep.ood_fn + ep.ood_tn + ep.ood_miss - override_fail_given_miss) +
        ep.p_pos * ep.ec_miss_given_pos * override_fail_given_miss;
    return clamp_unit(raw);
}

ClampedProbability modified_failure_prob_e1(const EventProbabilities& ep) {
    ep.validate();
    const double raw =
        ep.ec_fp + ep.ood_fp * (1.0 - ep.p_pos) + ep.ood_tp * (1.0 - ep.p_pos) -
        ep.ec_fp * (ep.ood_fp + ep.ood_tp - ep.ood_fp_given_ec_miss - ep.ood_tp_given_ec_miss);
    return clamp_unit(raw);
}

RiskReport total_risk(double p_e0, double p_e1, const Severities& sev) {
    sev.validate();
    if (!(p_e0 >= 0.0 && p_e0 <= 1.0)) throw ValidationError("p_e0 must lie in [0,1]");
    if (!(p_e1 >= 0.0 && p_e1 <= 1.0)) throw ValidationError("p_e1 must lie in [0,1]");
    return {p_e0, p_e1, p_e0 * sev.e0 + p_e1 * sev.e1};
}

} // namespace rcd
