#include "rcd/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rcd/acquisition.hpp"
#include "rcd/error.hpp"
#include "rcd/gp.hpp"
#include "rcd/metrics.hpp"
#include "rcd/risk.hpp"
#include "rcd/rng.hpp"

namespace rcd {

namespace {

constexpr int kBaselineSizeStep = 8;
constexpr int kGridEcStep = 32;
constexpr int kGridOodStep = 8;

int round_clamp(double v, double lo, double hi) {
    const double r = std::llround(std::min(std::max(v, lo), hi));
    return static_cast<int>(std::min(std::max(r, std::ceil(lo)), std::floor(hi)));
}

KernelSpec default_kernel() {
    KernelSpec k;
    k.length_scales = {0.2, 0.2};
    k.signal_variance = 0.0; // auto: sample variance of targets
    k.noise_variance = 1e-4;
    return k;
}

// Better-record ordering with the earliest-iteration tie-break baked in by
// scanning history in append order with a strict comparison.
bool improves(const EvaluationRecord& candidate, const std::optional<EvaluationRecord>& best) {
    if (!candidate.feasible) return false;
    return !best || candidate.risk < best->risk;
}

std::vector<int> lattice_values(double lo, double hi, int step) {
    std::vector<int> vals;
    for (double v = lo; v <= hi + 1e-9; v += step) {
        vals.push_back(static_cast<int>(std::llround(v)));
    }
    return vals;
}

} // namespace

void OptimizerConfig::validate(const Severities& sev) const {
    sev.validate();
    if (n_init < 1) throw ValidationError("optimizer.n_init must be >= 1");
    if (patience < 1) throw ValidationError("optimizer.patience must be >= 1");
    if (cg_restarts < 1) throw ValidationError("optimizer.cg_restarts must be >= 1");
    if (cg_max_iter < 1) throw ValidationError("optimizer.cg_max_iter must be >= 1");
    if (max_iterations < 1) throw ValidationError("optimizer.max_iterations must be >= 1");
    if (sweep_cap < 2) throw ValidationError("optimizer.sweep_cap must be >= 2");
    if (!(ei_xi >= 0.0)) throw ValidationError("optimizer.ei_xi must be >= 0");
    if (!(penalty_risk >= 10.0 * sev.e0)) {
        throw ValidationError("optimizer.penalty_risk must be >= 10 * severity(e0)");
    }
}

double trace_utilization(const Trace& trace, double period_ms) {
    if (trace.empty()) throw ValidationError("trace must be nonempty");
    double busy = 0.0;
    for (const SampleRecord& s : trace.samples) {
        busy += std::min(s.ood_time_ms + s.ec_time_ms, period_ms);
    }
    return busy / (static_cast<double>(trace.size()) * period_ms);
}

EvaluationRecord evaluate_candidate(const DesignPoint& lambda, const Scenario& sc, double u_base,
                                    const OptimizerConfig& cfg, std::uint64_t seed) {
    const std::uint64_t train_seed = derive_seed(seed, "train");
    const Trace trace = generate_trace(lambda, sc, train_seed);
    const DeadlineConfig deadline{sc.period_ms};
    const SweepGrid grid = SweepGrid::from_trace_midpoints(trace, cfg.sweep_cap);
    const SweepResult sweep = threshold_sweep(trace, deadline, sc.severities, grid);
    const double utilization = trace_utilization(trace, sc.period_ms);

    EvaluationRecord rec;
    rec.design = lambda;
    rec.design.ec_threshold = sweep.best.ec;
    rec.design.ood_threshold = sweep.best.ood;
    rec.train_seed = train_seed;
    rec.utilization = utilization;
    rec.feasible = utilization <= u_base;
    rec.risk = rec.feasible ? sweep.best_risk : cfg.penalty_risk;
    rec.p_e0 = sweep.best_p_e0;
    rec.p_e1 = sweep.best_p_e1;
    return rec;
}

BaselineResult run_baseline(const Scenario& sc, std::uint64_t seed) {
    sc.validate();
    const DesignSpace& space = sc.space;
    const int ood_placeholder = static_cast<int>(std::ceil(space.ood_size_lo));

    std::optional<EvaluationRecord> best;
    for (int size : lattice_values(space.ec_size_lo, space.ec_size_hi, kBaselineSizeStep)) {
        DesignPoint dp;
        dp.ec_size = size;
        dp.ood_size = ood_placeholder;
        dp.ood_threshold = 1.0;
        dp.ood_arch = space.arch_levels.front();
        const std::uint64_t train_seed =
            derive_seed(derive_seed(seed, "baseline"), static_cast<std::uint64_t>(size));
        const Trace trace = generate_trace(dp, sc, train_seed);

        // EC-only timing: the monitor job does not exist in the baseline.
        const double dn = static_cast<double>(trace.size());
        std::size_t misses = 0;
        std::size_t n_pos = 0;
        double busy = 0.0;
        std::vector<double> pos_scores, neg_scores;
        for (const SampleRecord& s : trace.samples) {
            if (s.has_object) ++n_pos;
            if (s.ec_time_ms > sc.period_ms) {
                ++misses;
            } else {
                (s.has_object ? pos_scores : neg_scores).push_back(s.ec_score);
            }
            busy += std::min(s.ec_time_ms, sc.period_ms);
        }
        std::sort(pos_scores.begin(), pos_scores.end());
        std::sort(neg_scores.begin(), neg_scores.end());
        const double utilization = busy / (dn * sc.period_ms);
        const double p_miss = static_cast<double>(misses) / dn;

        const SweepGrid grid = SweepGrid::from_trace_midpoints(trace, 512);
        for (double tau : grid.ec_levels) {
            const auto fired_pos = static_cast<double>(
                pos_scores.end() - std::lower_bound(pos_scores.begin(), pos_scores.end(), tau));
            const auto fired_neg = static_cast<double>(
                neg_scores.end() - std::lower_bound(neg_scores.begin(), neg_scores.end(), tau));
            const double p_fn = (static_cast<double>(pos_scores.size()) - fired_pos) / dn;
            const double p_fp = fired_neg / dn;
            const double p_e0 = p_fn + p_miss;
            const double p_e1 = p_fp;
            const RiskReport report = total_risk(p_e0, p_e1, sc.severities);
            const bool better = !best || report.risk < best->risk ||
                                (report.risk == best->risk && size == best->design.ec_size &&
                                 tau > best->design.ec_threshold);
            if (better) {
                EvaluationRecord rec;
                rec.design = dp;
                rec.design.ec_threshold = tau;
                rec.train_seed = train_seed;
                rec.risk = report.risk;
                rec.utilization = utilization;
                rec.feasible = true;
                rec.p_e0 = p_e0;
                rec.p_e1 = p_e1;
                best = rec;
            }
        }
    }
    return {*best, best->utilization};
}

CodesignResult run_codesign(const Scenario& sc, const DesignSpace& space,
                            const OptimizerConfig& cfg, double u_base) {
    sc.validate();
    space.validate();
    cfg.validate(sc.severities);
    if (!(u_base > 0.0 && u_base <= 1.0)) throw ValidationError("u_base must lie in (0,1]");

    const auto partitions = space.partitions();
    CodesignResult result;
    std::optional<EvaluationRecord> best;

    auto evaluate_into_history = [&](const DesignPoint& lambda, int iteration, int partition_id,
                                     std::uint64_t seed) {
        EvaluationRecord rec = evaluate_candidate(lambda, sc, u_base, cfg, seed);
        rec.iteration = iteration;
        rec.partition_id = partition_id;
        result.history.push_back(rec);
        return rec;
    };

    // Initial table: n_init uniform samples per partition.
    const std::uint64_t init_root = derive_seed(cfg.seed, "init");
    for (const auto& part : partitions) {
        for (int j = 0; j < cfg.n_init; ++j) {
            const std::uint64_t s =
                derive_seed(init_root, static_cast<std::uint64_t>(part.id), static_cast<std::uint64_t>(j));
            SplitMix64 rng(s);
            DesignPoint lambda;
            lambda.ec_size = round_clamp(rng.uniform(part.ec_lo, part.ec_hi), part.ec_lo, part.ec_hi);
            lambda.ood_size = round_clamp(rng.uniform(part.ood_lo, part.ood_hi), part.ood_lo, part.ood_hi);
            lambda.ood_arch = space.arch_levels[rng.next_below(space.arch_levels.size())];
            const EvaluationRecord rec = evaluate_into_history(lambda, 0, part.id, derive_seed(s, "eval"));
            if (improves(rec, best)) best = rec;
        }
    }

    const AcquisitionSettings acq{cfg.ei_xi, cfg.cg_restarts, cfg.cg_max_iter};
    int no_improvement = 0;
    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        const double incumbent = best ? best->risk : cfg.penalty_risk;
        bool improved = false;
        for (const auto& part : partitions) {
            // Per-architecture surrogates over this partition's rows.
            std::vector<GPModel> models;
            models.reserve(space.arch_levels.size());
            std::vector<ArchSurrogate> surrogates;
            for (OodArch arch : space.arch_levels) {
                std::vector<double> xs_ec, xs_ood, ys;
                for (const EvaluationRecord& r : result.history) {
                    if (r.partition_id != part.id || r.design.ood_arch != arch) continue;
                    xs_ec.push_back(space.norm_ec(r.design.ec_size));
                    xs_ood.push_back(space.norm_ood(r.design.ood_size));
                    ys.push_back(r.risk);
                }
                if (ys.empty()) {
                    surrogates.push_back({arch, nullptr});
                    continue;
                }
                Eigen::MatrixXd X(ys.size(), 2);
                Eigen::VectorXd y(ys.size());
                for (std::size_t i = 0; i < ys.size(); ++i) {
                    X(static_cast<Eigen::Index>(i), 0) = xs_ec[i];
                    X(static_cast<Eigen::Index>(i), 1) = xs_ood[i];
                    y[static_cast<Eigen::Index>(i)] = ys[i];
                }
                models.push_back(GPModel::fit(X, y, default_kernel()));
                surrogates.push_back({arch, &models.back()});
            }

            NumericBox box;
            box.lo = {space.norm_ec(part.ec_lo), space.norm_ood(part.ood_lo)};
            box.hi = {space.norm_ec(part.ec_hi), space.norm_ood(part.ood_hi)};
            const Proposal prop = maximize_acquisition(
                surrogates, box, incumbent, acq,
                derive_seed(derive_seed(cfg.seed, "acq"), static_cast<std::uint64_t>(iter),
                            static_cast<std::uint64_t>(part.id)));

            DesignPoint lambda;
            lambda.ec_size = round_clamp(space.denorm_ec(prop.point[0]), part.ec_lo, part.ec_hi);
            lambda.ood_size = round_clamp(space.denorm_ood(prop.point[1]), part.ood_lo, part.ood_hi);
            lambda.ood_arch = prop.arch;
            const EvaluationRecord rec = evaluate_into_history(
                lambda, iter, part.id,
                derive_seed(derive_seed(cfg.seed, "eval"), static_cast<std::uint64_t>(iter),
                            static_cast<std::uint64_t>(part.id)));
            if (improves(rec, best)) {
                best = rec;
                improved = true;
            }
        }
        no_improvement = improved ? 0 : no_improvement + 1;
        if (no_improvement >= cfg.patience) break;
    }

    result.best = best;
    result.feasible_found = best.has_value();
    return result;
}

std::vector<EvaluationRecord> run_grid_search(const Scenario& sc, const DesignSpace& space,
                                              double u_base, std::uint64_t seed,
                                              std::size_t max_evals, const OptimizerConfig& cfg) {
    sc.validate();
    space.validate();
    const std::vector<int> ecs = lattice_values(space.ec_size_lo, space.ec_size_hi, kGridEcStep);
    const std::vector<int> oods = lattice_values(space.ood_size_lo, space.ood_size_hi, kGridOodStep);
    const std::size_t n_arch = space.arch_levels.size();

    SplitMix64 rng(derive_seed(seed, "grid-start"));
    const std::size_t ec0 = rng.next_below(ecs.size());
    const std::size_t ood0 = rng.next_below(oods.size());
    const std::size_t arch0 = rng.next_below(n_arch);

    std::vector<EvaluationRecord> history;
    std::size_t idx = 0;
    for (std::size_t ai = 0; ai < n_arch; ++ai) {
        const OodArch arch = space.arch_levels[(arch0 + ai) % n_arch];
        for (std::size_t xi = 0; xi < ecs.size(); ++xi) {
            const int ec = ecs[(ec0 + xi) % ecs.size()];
            for (std::size_t yi = 0; yi < oods.size(); ++yi) {
                const int ood = oods[(ood0 + yi) % oods.size()];
                if (max_evals > 0 && idx >= max_evals) return history;
                DesignPoint lambda;
                lambda.ec_size = ec;
                lambda.ood_size = ood;
                lambda.ood_arch = arch;
                EvaluationRecord rec = evaluate_candidate(
                    lambda, sc, u_base, cfg, derive_seed(derive_seed(seed, "grid"), idx));
                rec.iteration = static_cast<int>(idx);
                rec.partition_id = space.partition_of(ec, ood);
                history.push_back(rec);
                ++idx;
            }
        }
    }
    return history;
}

namespace {

constexpr const char* kHistoryHeader =
    "iteration,partition,ec_size,ec_threshold,ood_size,ood_threshold,ood_arch,risk,p_e0,p_e1,"
    "utilization,feasible,train_seed";

} // namespace

void write_history_csv(const std::vector<EvaluationRecord>& history, std::ostream& out) {
    out << kHistoryHeader << '\n';
    for (const EvaluationRecord& r : history) {
        out << r.iteration << ',' << r.partition_id << ',' << r.design.ec_size << ','
            << format_double(r.design.ec_threshold) << ',' << r.design.ood_size << ','
            << format_double(r.design.ood_threshold) << ',' << to_string(r.design.ood_arch) << ','
            << format_double(r.risk) << ',' << format_double(r.p_e0) << ','
            << format_double(r.p_e1) << ',' << format_double(r.utilization) << ','
            << (r.feasible ? 1 : 0) << ',' << r.train_seed << '\n';
    }
}

void write_history_csv(const std::vector<EvaluationRecord>& history,
                       const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open history file for writing: " + path.string());
    write_history_csv(history, out);
}

std::vector<EvaluationRecord> read_history_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("history CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHistoryHeader) throw IoError("history CSV header mismatch");
    std::vector<EvaluationRecord> out;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<std::string> toks;
        while (std::getline(ss, tok, ',')) toks.push_back(tok);
        if (toks.size() != 13) throw IoError("history CSV row must have 13 fields");
        EvaluationRecord r;
        r.iteration = std::stoi(toks[0]);
        r.partition_id = std::stoi(toks[1]);
        r.design.ec_size = std::stoi(toks[2]);
        r.design.ec_threshold = std::stod(toks[3]);
        r.design.ood_size = std::stoi(toks[4]);
        r.design.ood_threshold = std::stod(toks[5]);
        r.design.ood_arch = ood_arch_from_string(toks[6]);
        r.risk = std::stod(toks[7]);
        r.p_e0 = std::stod(toks[8]);
        r.p_e1 = std::stod(toks[9]);
        r.utilization = std::stod(toks[10]);
        r.feasible = toks[11] == "1";
        r.train_seed = std::stoull(toks[12]);
        out.push_back(r);
    }
    return out;
}

std::vector<EvaluationRecord> read_history_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open history file: " + path.string());
    return read_history_csv(in);
}

} // namespace rcd
