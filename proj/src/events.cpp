#include "rcd/events.hpp"

#include <cmath>
#include <string>

#include "rcd/error.hpp"

namespace rcd {

namespace {

constexpr double kSumTol = 1e-9;

void check_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError(std::string(name) + " must lie in [0,1], got " + std::to_string(v));
    }
}

} // namespace

void EventProbabilities::validate() const {
    check_unit(ec_fp, "ec_fp");
    check_unit(ec_tp, "ec_tp");
    check_unit(ec_fn, "ec_fn");
    check_unit(ec_tn, "ec_tn");
    check_unit(ec_miss, "ec_miss");
    check_unit(ood_fp, "ood_fp");
    check_unit(ood_tp, "ood_tp");
    check_unit(ood_fn, "ood_fn");
    check_unit(ood_tn, "ood_tn");
    check_unit(ood_miss, "ood_miss");
    check_unit(ood_fp_given_ec_miss, "ood_fp_given_ec_miss");
    check_unit(ood_tp_given_ec_miss, "ood_tp_given_ec_miss");
    check_unit(ood_fn_given_ec_miss, "ood_fn_given_ec_miss");
    check_unit(ood_tn_given_ec_miss, "ood_tn_given_ec_miss");
    check_unit(ood_miss_given_ec_miss, "ood_miss_given_ec_miss");
    check_unit(p_pos, "p_pos");
    check_unit(ec_miss_given_pos, "ec_miss_given_pos");

    const double ec_sum = ec_fp + ec_tp + ec_fn + ec_tn + ec_miss;
    if (std::abs(ec_sum - 1.0) > kSumTol) {
        throw ValidationError("EC outcome probabilities must sum to 1, got " + std::to_string(ec_sum));
    }
    const double ood_sum = ood_fp + ood_tp + ood_fn + ood_tn + ood_miss;
    if (std::abs(ood_sum - 1.0) > kSumTol) {
        throw ValidationError("OOD outcome probabilities must sum to 1, got " + std::to_string(ood_sum));
    }
    const double cond_sum = ood_fp_given_ec_miss + ood_tp_given_ec_miss + ood_fn_given_ec_miss +
                            ood_tn_given_ec_miss + ood_miss_given_ec_miss;
    // Zero-miss convention: no mass on the conditioning event, all conditionals zero.
    const double expected = (ec_miss == 0.0) ? 0.0 : 1.0;
    if (std::abs(cond_sum - expected) > kSumTol) {
        throw ValidationError("OOD-given-EC-miss probabilities must sum to " +
                              std::to_string(expected) + ", got " + std::to_string(cond_sum));
    }
    // Structural: EC tp/fn require a positive ground truth, fp/tn a negative one.
    if (ec_tp + ec_fn > p_pos + kSumTol) {
        throw ValidationError("ec_tp + ec_fn exceeds p_pos");
    }
    if (ec_fp + ec_tn > (1.0 - p_pos) + kSumTol) {
        throw ValidationError("ec_fp + ec_tn exceeds 1 - p_pos");
    }
}

void Severities::validate() const {
    if (!(e0 >= 0.0) || !std::isfinite(e0)) throw ValidationError("severity e0 must be >= 0");
    if (!(e1 >= 0.0) || !std::isfinite(e1)) throw ValidationError("severity e1 must be >= 0");
}

} // namespace rcd
