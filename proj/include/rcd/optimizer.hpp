#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "rcd/backend.hpp"
#include "rcd/design_space.hpp"
#include "rcd/events.hpp"

namespace rcd {

// One evaluated candidate; the row type of the optimizer's table.
struct EvaluationRecord {
    DesignPoint design;
    std::uint64_t train_seed = 0;
    double risk = 0.0;        // penalty value on infeasible records
    double utilization = 0.0;
    bool feasible = false;    // utilization <= the baseline's average utilization
    double p_e0 = 0.0;
    double p_e1 = 0.0;
    int partition_id = -1;    // proposing partition; -1 outside the co-design loop
    int iteration = -1;       // 0 for initial samples, then 1, 2, ...
};

struct OptimizerConfig {
    int n_init = 5;               // initial samples per partition
    double penalty_risk = 30.0;   // must dominate any achievable true risk
    int patience = 10;            // iterations without improvement before stopping
    double ei_xi = 0.0;           // acquisition exploration offset
    int cg_restarts = 12;
    int cg_max_iter = 60;
    int max_iterations = 50;      // hard cap on loop iterations
    std::size_t sweep_cap = 64;   // threshold-grid levels per axis inside evaluations
    std::uint64_t seed = 1;

    void validate(const Severities& sev) const;
};

// Generate a trace for the candidate, sweep thresholds for the risk-minimal
// T, measure average utilization from the same trace, and apply the penalty
// when the utilization constraint is violated. Deterministic given the seed.
EvaluationRecord evaluate_candidate(const DesignPoint& lambda, const Scenario& sc, double u_base,
                                    const OptimizerConfig& cfg, std::uint64_t seed);

struct BaselineResult {
    EvaluationRecord record; // EC-only optimum; monitor fields are placeholders
    double u_base = 0.0;
};

// Dense grid over EC size and threshold with no monitor in the system
// (single job, baseline fault tree). The optimum's utilization becomes the
// co-design constraint.
BaselineResult run_baseline(const Scenario& sc, std::uint64_t seed);

struct CodesignResult {
    std::optional<EvaluationRecord> best; // absent when nothing feasible was found
    std::vector<EvaluationRecord> history;
    bool feasible_found = false;
};

// Partitioned Bayesian optimization: per-partition, per-architecture GP
// surrogates over the table so far, expected improvement maximized by
// conjugate gradient, one candidate per partition per iteration, stopping on
// `patience` iterations without improvement. Bit-reproducible from cfg.seed.
CodesignResult run_codesign(const Scenario& sc, const DesignSpace& space,
                            const OptimizerConfig& cfg, double u_base);

// Comparator: raster sweep over the 32 px (EC) x 8 px (monitor) lattice and
// both architecture levels from a seeded random start point, wrapping around.
// max_evals = 0 visits the whole lattice.
std::vector<EvaluationRecord> run_grid_search(const Scenario& sc, const DesignSpace& space,
                                              double u_base, std::uint64_t seed,
                                              std::size_t max_evals = 0,
                                              const OptimizerConfig& cfg = {});

// Average utilization of a trace's periods under sequential dispatch.
double trace_utilization(const Trace& trace, double period_ms);

// Evaluation-table persistence.
// Columns: iteration,partition,ec_size,ec_threshold,ood_size,ood_threshold,
//          ood_arch,risk,p_e0,p_e1,utilization,feasible,train_seed
void write_history_csv(const std::vector<EvaluationRecord>& history, std::ostream& out);
void write_history_csv(const std::vector<EvaluationRecord>& history, const std::filesystem::path& path);
std::vector<EvaluationRecord> read_history_csv(std::istream& in);
std::vector<EvaluationRecord> read_history_csv(const std::filesystem::path& path);

} // namespace rcd
