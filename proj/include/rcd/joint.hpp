#pragma once

#include <array>

#include "rcd/events.hpp"
#include "rcd/rng.hpp"

namespace rcd {

// Exact joint distribution over (EC outcome x OOD outcome x ground truth):
// 5 x 5 x 2 = 50 cells, stored dense. This is the ground-truth oracle the
// closed-form risk expressions are checked against; everything on it is exact
// summation, never sampling.
//
// Structural zeros baked into validate():
//   - an EC false positive / true negative requires a negative ground truth,
//     a true positive / false negative a positive one;
//   - if the OOD job overruns the deadline on the shared resource, the EC
//     (dispatched after it) necessarily misses too.
class JointOutcomeDistribution {
public:
    static constexpr int kCells = 50;

    double& at(EcOutcome ec, OodOutcome ood, bool pos) { return pmf_[index(ec, ood, pos)]; }
    double at(EcOutcome ec, OodOutcome ood, bool pos) const { return pmf_[index(ec, ood, pos)]; }

    double sum() const;

    // Throws ValidationError when mass is misplaced or does not sum to 1.
    void validate() const;

    // True when the cell may carry probability mass.
    static bool cell_allowed(EcOutcome ec, OodOutcome ood, bool pos);

    // Unit mass on a single allowed cell.
    static JointOutcomeDistribution point_mass(EcOutcome ec, OodOutcome ood, bool pos);

    static int index(EcOutcome ec, OodOutcome ood, bool pos) {
        return (static_cast<int>(ec) * 5 + static_cast<int>(ood)) * 2 + (pos ? 1 : 0);
    }

private:
    std::array<double, kCells> pmf_{};
};

// Exact P(E0), P(E1) of the monitored system, summed cell by cell:
//   E0 = {monitor fn, tn or miss} and {EC fn, or EC miss on a positive sample}
//   E1 = {monitor fp or tp on a negative sample} or {EC fp}
TopEventProbs oracle_event_probs(const JointOutcomeDistribution& joint);

// Exact P(E0), P(E1) of the baseline (EC-only) system: E0 = EC fn or miss,
// E1 = EC fp. Only the EC margin of the joint is consulted.
TopEventProbs oracle_baseline_probs(const JointOutcomeDistribution& joint);

// All marginals and conditionals computed exactly from the pmf. Conditionals
// given an EC miss (and ec_miss_given_pos when P(pos) = 0) use the
// zero-mass-means-zero convention.
EventProbabilities marginalize(const JointOutcomeDistribution& joint);

// Random joint with zero deadline-miss mass whose monitor outcome is drawn
// independently of both ground truth and EC outcome. On this stratum the
// printed closed forms agree with the oracle exactly.
JointOutcomeDistribution sample_joint_factorized_zero_miss(SplitMix64& rng);

// Random joint over every allowed cell, deadline-miss mass included. No
// independence structure is imposed beyond the structural zeros.
JointOutcomeDistribution sample_joint_general(SplitMix64& rng);

} // namespace rcd
