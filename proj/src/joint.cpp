#include "rcd/joint.hpp"

#include <cmath>
#include <string>

#include "rcd/error.hpp"

namespace rcd {

namespace {

constexpr double kMassTol = 1e-12;

bool ood_negative_result(OodOutcome o) {
    return o == OodOutcome::FalseNegative || o == OodOutcome::TrueNegative ||
           o == OodOutcome::DeadlineMiss;
}

bool ood_positive_result(OodOutcome o) {
    return o == OodOutcome::FalsePositive || o == OodOutcome::TruePositive;
}

} // namespace

double JointOutcomeDistribution::sum() const {
    double s = 0.0;
    for (double v : pmf_) s += v;
    return s;
}

bool JointOutcomeDistribution::cell_allowed(EcOutcome ec, OodOutcome ood, bool pos) {
    if (pos && (ec == EcOutcome::FalsePositive || ec == EcOutcome::TrueNegative)) return false;
    if (!pos && (ec == EcOutcome::TruePositive || ec == EcOutcome::FalseNegative)) return false;
    if (ood == OodOutcome::DeadlineMiss && ec != EcOutcome::DeadlineMiss) return false;
    return true;
}

void JointOutcomeDistribution::validate() const {
    for (EcOutcome ec : kEcOutcomes) {
        for (OodOutcome ood : kOodOutcomes) {
            for (bool pos : {false, true}) {
                const double v = at(ec, ood, pos);
                if (!(v >= 0.0 && v <= 1.0) || !std::isfinite(v)) {
                    throw ValidationError("joint pmf entry outside [0,1]");
                }
                if (v > 0.0 && !cell_allowed(ec, ood, pos)) {
                    throw ValidationError("joint pmf places mass on a structurally forbidden cell (ec=" +
                                          std::to_string(static_cast<int>(ec)) + ", ood=" +
                                          std::to_string(static_cast<int>(ood)) + ", pos=" +
                                          std::to_string(pos ? 1 : 0) + ")");
                }
            }
        }
    }
    const double s = sum();
    if (std::abs(s - 1.0) > kMassTol) {
        throw ValidationError("joint pmf must sum to 1, got " + std::to_string(s));
    }
}

JointOutcomeDistribution JointOutcomeDistribution::point_mass(EcOutcome ec, OodOutcome ood, bool pos) {
    if (!cell_allowed(ec, ood, pos)) {
        throw ValidationError("point_mass: cell is structurally forbidden");
    }
    JointOutcomeDistribution j;
    j.at(ec, ood, pos) = 1.0;
    return j;
}

TopEventProbs oracle_event_probs(const JointOutcomeDistribution& joint) {
    joint.validate();
    TopEventProbs out;
    for (EcOutcome ec : kEcOutcomes) {
        for (OodOutcome ood : kOodOutcomes) {
            for (bool pos : {false, true}) {
                const double v = joint.at(ec, ood, pos);
                if (v == 0.0) continue;
                const bool ec_wrong_silent =
                    ec == EcOutcome::FalseNegative || (ec == EcOutcome::DeadlineMiss && pos);
                if (ood_negative_result(ood) && ec_wrong_silent) out.p_e0 += v;
                const bool false_alarm =
                    (ood_positive_result(ood) && !pos) || ec == EcOutcome::FalsePositive;
                if (false_alarm) out.p_e1 += v;
            }
        }
    }
    return out;
}

TopEventProbs oracle_baseline_probs(const JointOutcomeDistribution& joint) {
    joint.validate();
    TopEventProbs out;
    for (EcOutcome ec : kEcOutcomes) {
        for (OodOutcome ood : kOodOutcomes) {
            for (bool pos : {false, true}) {
                const double v = joint.at(ec, ood, pos);
                if (ec == EcOutcome::FalseNegative || ec == EcOutcome::DeadlineMiss) out.p_e0 += v;
                if (ec == EcOutcome::FalsePositive) out.p_e1 += v;
            }
        }
    }
    return out;
}

EventProbabilities marginalize(const JointOutcomeDistribution& joint) {
    joint.validate();
    EventProbabilities ep;
    double miss_mass = 0.0;
    double miss_and_pos = 0.0;
    std::array<double, 5> ood_given_miss{};
    for (EcOutcome ec : kEcOutcomes) {
        for (OodOutcome ood : kOodOutcomes) {
            for (bool pos : {false, true}) {
                const double v = joint.at(ec, ood, pos);
                switch (ec) {
                    case EcOutcome::FalsePositive: ep.ec_fp += v; break;
                    case EcOutcome::TruePositive: ep.ec_tp += v; break;
                    case EcOutcome::FalseNegative: ep.ec_fn += v; break;
                    case EcOutcome::TrueNegative: ep.ec_tn += v; break;
                    case EcOutcome::DeadlineMiss: ep.ec_miss += v; break;
                }
                switch (ood) {
                    case OodOutcome::FalsePositive: ep.ood_fp += v; break;
                    case OodOutcome::TruePositive: ep.ood_tp += v; break;
                    case OodOutcome::FalseNegative: ep.ood_fn += v; break;
                    case OodOutcome::TrueNegative: ep.ood_tn += v; break;
                    case OodOutcome::DeadlineMiss: ep.ood_miss += v; break;
                }
                if (pos) ep.p_pos += v;
                if (ec == EcOutcome::DeadlineMiss) {
                    miss_mass += v;
                    if (pos) miss_and_pos += v;
                    ood_given_miss[static_cast<int>(ood)] += v;
                }
            }
        }
    }
    if (miss_mass > 0.0) {
        ep.ood_fp_given_ec_miss = ood_given_miss[0] / miss_mass;
        ep.ood_tp_given_ec_miss = ood_given_miss[1] / miss_mass;
        ep.ood_fn_given_ec_miss = ood_given_miss[2] / miss_mass;
        ep.ood_tn_given_ec_miss = ood_given_miss[3] / miss_mass;
        ep.ood_miss_given_ec_miss = ood_given_miss[4] / miss_mass;
    }
    ep.ec_miss_given_pos = (ep.p_pos > 0.0) ? miss_and_pos / ep.p_pos : 0.0;
    return ep;
}

JointOutcomeDistribution sample_joint_factorized_zero_miss(SplitMix64& rng) {
    const double p_pos = rng.next_unit();

    // EC outcome given ground truth; no deadline-miss mass.
    const double wb = -std::log(rng.next_unit());
    const double wc = -std::log(rng.next_unit());
    const double q_tp = wb / (wb + wc);
    const double wa = -std::log(rng.next_unit());
    const double wd = -std::log(rng.next_unit());
    const double q_fp = wa / (wa + wd);

    // Monitor outcome, independent of everything else; no miss mass.
    std::array<double, 4> w{};
    double wsum = 0.0;
    for (double& x : w) {
        x = -std::log(rng.next_unit());
        wsum += x;
    }
    const double r_fp = w[0] / wsum;
    const double r_tp = w[1] / wsum;
    const double r_fn = w[2] / wsum;
    const double r_tn = w[3] / wsum;

    JointOutcomeDistribution j;
    const std::array<std::pair<OodOutcome, double>, 4> ood_probs = {
        std::pair{OodOutcome::FalsePositive, r_fp}, std::pair{OodOutcome::TruePositive, r_tp},
        std::pair{OodOutcome::FalseNegative, r_fn}, std::pair{OodOutcome::TrueNegative, r_tn}};
    for (const auto& [ood, r] : ood_probs) {
        j.at(EcOutcome::TruePositive, ood, true) = p_pos * q_tp * r;
        j.at(EcOutcome::FalseNegative, ood, true) = p_pos * (1.0 - q_tp) * r;
        j.at(EcOutcome::FalsePositive, ood, false) = (1.0 - p_pos) * q_fp * r;
        j.at(EcOutcome::TrueNegative, ood, false) = (1.0 - p_pos) * (1.0 - q_fp) * r;
    }
    return j;
}

JointOutcomeDistribution sample_joint_general(SplitMix64& rng) {
    JointOutcomeDistribution j;
    double total = 0.0;
    for (EcOutcome ec : kEcOutcomes) {
        for (OodOutcome ood : kOodOutcomes) {
            for (bool pos : {false, true}) {
                if (!JointOutcomeDistribution::cell_allowed(ec, ood, pos)) continue;
                const double w = -std::log(rng.next_unit());
                j.at(ec, ood, pos) = w;
                total += w;
            }
        }
    }
    for (EcOutcome ec : kEcOutcomes) {
        for (OodOutcome ood : kOodOutcomes) {
            for (bool pos : {false, true}) {
                j.at(ec, ood, pos) /= total;
            }
        }
    }
    return j;
}

} // namespace rcd
