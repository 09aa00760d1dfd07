#pragma once

#include "rcd/events.hpp"

namespace rcd {

// Fault-tree closed forms. The modified-system expressions are implemented
// verbatim as derived, never "corrected"; the enumeration oracle in joint.hpp
// is the instrument for quantifying where they diverge (see the oracle-check
// CLI command).

// Baseline (EC-only) top events: P(E0) = P(fn) + P(miss), P(E1) = P(fp).
TopEventProbs baseline_failure_probs(const EventProbabilities& ep);

// Monitored-system P(E0): the EC stays silent on a hazard and the monitor
// fails to override. Clamped into [0,1] with a flag when the raw expression
// leaves the range.
ClampedProbability modified_failure_prob_e0(const EventProbabilities& ep);

// Monitored-system P(E1): a false alarm from either component on a negative
// sample, with the double-counted overlap subtracted.
ClampedProbability modified_failure_prob_e1(const EventProbabilities& ep);

// risk = p_e0 * severity(e0) + p_e1 * severity(e1).
RiskReport total_risk(double p_e0, double p_e1, const Severities& sev);

} // namespace rcd
