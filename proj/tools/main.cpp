#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "rcd/error.hpp"
#include "rcd/joint.hpp"
#include "rcd/metrics.hpp"
#include "rcd/optimizer.hpp"
#include "rcd/risk.hpp"
#include "rcd/rng.hpp"
#include "rcd/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace rcd;

namespace {

struct CommonOpts {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
    std::optional<double> deadline_ms;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_config = true) {
    auto* copt = cmd->add_option("--config", o.config, "Scenario JSON file");
    if (needs_config) copt->required();
    cmd->add_option("--out", o.out, "Output directory (created if missing)");
    cmd->add_option("--seed", o.seed, "Master seed; overrides the scenario's master_seed");
    cmd->add_option("--deadline-ms", o.deadline_ms, "Override the scenario period/deadline in ms");
}

// Master seed resolution plus per-command substream derivation: every command
// draws all of its randomness from derive_seed(master, command_name).
struct RunContext {
    LoadedConfig cfg;
    std::uint64_t master = 0;
    fs::path out_dir;
};

RunContext prepare(const CommonOpts& o, const std::string& command) {
    RunContext ctx;
    ctx.cfg = load_scenario_file(o.config);
    if (o.deadline_ms) {
        ctx.cfg.scenario.period_ms = *o.deadline_ms;
        ctx.cfg.scenario.validate();
    }
    ctx.master = o.seed ? *o.seed : ctx.cfg.scenario.master_seed;
    ctx.cfg.scenario.master_seed = ctx.master;
    ctx.cfg.optimizer.seed = derive_seed(ctx.master, command);
    ctx.out_dir = o.out;
    fs::create_directories(ctx.out_dir);
    return ctx;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path.string());
    out << content;
}

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

int cmd_baseline(const CommonOpts& o) {
    RunContext ctx = prepare(o, "baseline");
    const BaselineResult res = run_baseline(ctx.cfg.scenario, derive_seed(ctx.master, "baseline"));
    write_file(ctx.out_dir / "baseline.json", baseline_result_to_json(res));
    std::cout << "baseline risk " << fixed4(res.record.risk) << "  ec_size " << res.record.design.ec_size
              << "  ec_threshold " << fixed4(res.record.design.ec_threshold) << "  u_base "
              << fixed4(res.u_base) << "\n";
    return 0;
}

nlohmann::json best_json(const std::optional<EvaluationRecord>& best, const BaselineResult& base) {
    nlohmann::json j;
    j["status"] = best ? "feasible" : "infeasible";
    j["baseline_risk"] = base.record.risk;
    j["u_base"] = base.u_base;
    if (best) {
        j["best"] = nlohmann::json::parse(evaluation_record_to_json(*best));
        j["reduction"] = 1.0 - best->risk / base.record.risk;
    } else {
        j["best"] = nullptr;
        j["reduction"] = nullptr;
    }
    return j;
}

void print_search_outcome(const std::optional<EvaluationRecord>& best, const BaselineResult& base) {
    std::cout << "baseline risk " << fixed4(base.record.risk) << "  u_base " << fixed4(base.u_base)
              << "\n";
    if (!best) {
        std::cout << "status Infeas.\n";
        return;
    }
    std::cout << "best risk " << fixed4(best->risk) << "  reduction "
              << fixed4(1.0 - best->risk / base.record.risk) << "  feasible\n";
    std::cout << "design ec " << best->design.ec_size << " @ " << fixed4(best->design.ec_threshold)
              << "  ood " << to_string(best->design.ood_arch) << " " << best->design.ood_size << " @ "
              << fixed4(best->design.ood_threshold) << "  utilization " << fixed4(best->utilization)
              << "\n";
}

int cmd_codesign(const CommonOpts& o) {
    RunContext ctx = prepare(o, "codesign");
    const BaselineResult base = run_baseline(ctx.cfg.scenario, derive_seed(ctx.master, "baseline"));
    const CodesignResult res =
        run_codesign(ctx.cfg.scenario, ctx.cfg.scenario.space, ctx.cfg.optimizer, base.u_base);
    write_history_csv(res.history, ctx.out_dir / "history.csv");
    write_file(ctx.out_dir / "best.json", best_json(res.best, base).dump(2) + "\n");
    print_search_outcome(res.best, base);
    return 0;
}

int cmd_grid(const CommonOpts& o, std::size_t max_evals) {
    RunContext ctx = prepare(o, "grid");
    const BaselineResult base = run_baseline(ctx.cfg.scenario, derive_seed(ctx.master, "baseline"));
    const auto history = run_grid_search(ctx.cfg.scenario, ctx.cfg.scenario.space, base.u_base,
                                         ctx.cfg.optimizer.seed, max_evals, ctx.cfg.optimizer);
    std::optional<EvaluationRecord> best;
    for (const EvaluationRecord& r : history) {
        if (r.feasible && (!best || r.risk < best->risk)) best = r;
    }
    write_history_csv(history, ctx.out_dir / "history.csv");
    write_file(ctx.out_dir / "best.json", best_json(best, base).dump(2) + "\n");
    print_search_outcome(best, base);
    return 0;
}

int cmd_sweep(const CommonOpts& o, int ec_size, int ood_size, const std::string& arch,
              std::optional<std::uint64_t> train_seed, std::size_t cap) {
    RunContext ctx = prepare(o, "sweep");
    DesignPoint dp;
    dp.ec_size = ec_size;
    dp.ood_size = ood_size;
    dp.ood_arch = ood_arch_from_string(arch);
    const std::uint64_t ts = train_seed ? *train_seed : derive_seed(ctx.master, "sweep-train");
    const Trace trace = generate_trace(dp, ctx.cfg.scenario, ts);
    const SweepGrid grid = SweepGrid::from_trace_midpoints(trace, cap);
    const SweepResult res = threshold_sweep(trace, DeadlineConfig{ctx.cfg.scenario.period_ms},
                                            ctx.cfg.scenario.severities, grid);
    std::string csv = "tau_ec,tau_ood,risk\n";
    for (const SweepPoint& p : res.curve) {
        csv += format_double(p.t.ec) + "," + format_double(p.t.ood) + "," + format_double(p.risk) + "\n";
    }
    write_file(ctx.out_dir / "sweep.csv", csv);
    std::cout << "best tau_ec " << fixed4(res.best.ec) << "  tau_ood " << fixed4(res.best.ood)
              << "  risk " << fixed4(res.best_risk) << "\n";
    return 0;
}

struct SurfaceAxes {
    std::string x = "ec_size";
    std::string y = "ood_size";
    int nx = 25;
    int ny = 25;
};

int cmd_surface(const CommonOpts& o, const SurfaceAxes& axes, DesignPoint fixed) {
    RunContext ctx = prepare(o, "surface");
    const Scenario& sc = ctx.cfg.scenario;
    const std::uint64_t surface_root = derive_seed(ctx.master, "surface");

    const std::map<std::string, std::pair<double, double>> ranges = {
        {"ec_size", {sc.space.ec_size_lo, sc.space.ec_size_hi}},
        {"ood_size", {sc.space.ood_size_lo, sc.space.ood_size_hi}},
        {"ec_threshold", {0.0, 1.0}},
        {"ood_threshold", {0.0, 1.0}},
    };
    auto check_axis = [&](const std::string& name, int n) {
        if (ranges.find(name) == ranges.end()) {
            throw ValidationError("surface: unknown axis '" + name +
                                  "' (expected ec_size, ood_size, ec_threshold or ood_threshold)");
        }
        if (n < 2) throw ValidationError("surface: grid must have at least 2 points per axis");
    };
    check_axis(axes.x, axes.nx);
    check_axis(axes.y, axes.ny);
    if (axes.x == axes.y) throw ValidationError("surface: axes must differ");

    auto axis_values = [&](const std::string& name, int n) {
        const auto [lo, hi] = ranges.at(name);
        std::vector<double> vals;
        vals.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            double v = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
            if (name == "ec_size" || name == "ood_size") v = std::round(v);
            vals.push_back(v);
        }
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        return vals;
    };

    auto apply = [](DesignPoint dp, const std::string& name, double v) {
        if (name == "ec_size") dp.ec_size = static_cast<int>(v);
        else if (name == "ood_size") dp.ood_size = static_cast<int>(v);
        else if (name == "ec_threshold") dp.ec_threshold = v;
        else dp.ood_threshold = v;
        return dp;
    };

    // Traces depend only on the size pair; threshold axes reuse them.
    std::map<std::pair<int, int>, Trace> trace_cache;
    auto trace_for = [&](const DesignPoint& dp) -> const Trace& {
        const std::pair<int, int> key{dp.ec_size, dp.ood_size};
        auto it = trace_cache.find(key);
        if (it == trace_cache.end()) {
            const std::uint64_t ts = derive_seed(surface_root, static_cast<std::uint64_t>(dp.ec_size),
                                                 static_cast<std::uint64_t>(dp.ood_size));
            it = trace_cache.emplace(key, generate_trace(dp, sc, ts)).first;
        }
        return it->second;
    };

    std::string csv = axes.x + "," + axes.y + ",risk,p_e0,p_e1,p_e\n";
    for (double xv : axis_values(axes.x, axes.nx)) {
        for (double yv : axis_values(axes.y, axes.ny)) {
            const DesignPoint dp = apply(apply(fixed, axes.x, xv), axes.y, yv);
            dp.validate(sc.space);
            const Trace& trace = trace_for(dp);
            const EventProbabilities ep = estimate_event_probs(
                trace, {dp.ec_threshold, dp.ood_threshold}, DeadlineConfig{sc.period_ms});
            const double e0 = modified_failure_prob_e0(ep).value;
            const double e1 = modified_failure_prob_e1(ep).value;
            const RiskReport report = total_risk(e0, e1, sc.severities);
            csv += format_double(xv) + "," + format_double(yv) + "," + format_double(report.risk) +
                   "," + format_double(e0) + "," + format_double(e1) + "," +
                   format_double(ep.ec_miss) + "\n";
        }
    }
    write_file(ctx.out_dir / "surface.csv", csv);
    std::cout << "surface written: " << (ctx.out_dir / "surface.csv").string() << "\n";
    return 0;
}

struct StratumStats {
    double max_e0 = 0.0, max_e1 = 0.0;
    double sum_e0 = 0.0, sum_e1 = 0.0;
    std::size_t count = 0;

    void add(double d0, double d1) {
        max_e0 = std::max(max_e0, d0);
        max_e1 = std::max(max_e1, d1);
        sum_e0 += d0;
        sum_e1 += d1;
        ++count;
    }
};

int cmd_oracle_check(std::size_t trials, std::uint64_t seed, const std::string& out) {
    if (trials == 0) throw ValidationError("oracle-check: --trials must be >= 1");
    const std::uint64_t root = derive_seed(seed, "oracle-check");
    StratumStats zero_miss, with_miss;
    for (std::size_t t = 0; t < trials; ++t) {
        SplitMix64 rng(derive_seed(root, t));
        const bool zero = (t % 2 == 0);
        const JointOutcomeDistribution joint =
            zero ? sample_joint_factorized_zero_miss(rng) : sample_joint_general(rng);
        const EventProbabilities ep = marginalize(joint);
        const TopEventProbs oracle = oracle_event_probs(joint);
        const double d0 = std::abs(modified_failure_prob_e0(ep).value - oracle.p_e0);
        const double d1 = std::abs(modified_failure_prob_e1(ep).value - oracle.p_e1);
        (zero ? zero_miss : with_miss).add(d0, d1);
    }

    auto report_line = [](const char* name, const StratumStats& s) {
        std::string line = std::string(name) + " (" + std::to_string(s.count) + " joints): ";
        char buf[160];
        std::snprintf(buf, sizeof(buf), "e0 max %.3e mean %.3e; e1 max %.3e mean %.3e",
                      s.max_e0, s.count ? s.sum_e0 / s.count : 0.0, s.max_e1,
                      s.count ? s.sum_e1 / s.count : 0.0);
        return line + buf;
    };
    const std::string l0 = report_line("zero-miss stratum", zero_miss);
    const std::string l1 = report_line("with-miss stratum", with_miss);
    std::cout << l0 << "\n" << l1 << "\n";

    const bool pass = std::max(zero_miss.max_e0, zero_miss.max_e1) <= 1e-9;
    std::cout << (pass ? "zero-miss stratum agrees with the enumeration oracle\n"
                       : "zero-miss stratum DIVERGES from the enumeration oracle\n");
    if (!out.empty()) {
        nlohmann::json j;
        j["trials"] = trials;
        j["zero_miss"] = {{"count", zero_miss.count},
                          {"e0_max", zero_miss.max_e0},
                          {"e0_mean", zero_miss.count ? zero_miss.sum_e0 / zero_miss.count : 0.0},
                          {"e1_max", zero_miss.max_e1},
                          {"e1_mean", zero_miss.count ? zero_miss.sum_e1 / zero_miss.count : 0.0}};
        j["with_miss"] = {{"count", with_miss.count},
                          {"e0_max", with_miss.max_e0},
                          {"e0_mean", with_miss.count ? with_miss.sum_e0 / with_miss.count : 0.0},
                          {"e1_max", with_miss.max_e1},
                          {"e1_mean", with_miss.count ? with_miss.sum_e1 / with_miss.count : 0.0}};
        j["pass"] = pass;
        fs::create_directories(out);
        write_file(fs::path(out) / "oracle_check.json", j.dump(2) + "\n");
    }
    return pass ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Risk-aware co-design of a binary classifier and its OOD safety monitor"};
    app.require_subcommand(1);

    CommonOpts baseline_opts;
    auto* baseline = app.add_subcommand("baseline", "Optimize the monitor-free baseline system");
    add_common(baseline, baseline_opts);

    CommonOpts codesign_opts;
    auto* codesign = app.add_subcommand("codesign", "Run the partitioned Bayesian co-design loop");
    add_common(codesign, codesign_opts);

    CommonOpts grid_opts;
    std::size_t grid_max_evals = 0;
    auto* grid = app.add_subcommand("grid", "Raster grid-search comparator");
    add_common(grid, grid_opts);
    grid->add_option("--max-evals", grid_max_evals, "Stop after this many evaluations (0 = full lattice)");

    CommonOpts sweep_opts;
    int sweep_ec_size = 192;
    int sweep_ood_size = 64;
    std::string sweep_arch = "beta_vae";
    std::optional<std::uint64_t> sweep_train_seed;
    std::size_t sweep_cap = 512;
    auto* sweep = app.add_subcommand("sweep", "Threshold sweep for one structural design");
    add_common(sweep, sweep_opts);
    sweep->add_option("--ec-size", sweep_ec_size, "EC input size (px)");
    sweep->add_option("--ood-size", sweep_ood_size, "Monitor input size (px)");
    sweep->add_option("--arch", sweep_arch, "Monitor architecture (beta_vae|reconstruction)");
    sweep->add_option("--train-seed", sweep_train_seed, "Training seed (default: derived from master)");
    sweep->add_option("--cap", sweep_cap, "Max threshold levels per axis");

    CommonOpts surface_opts;
    SurfaceAxes axes;
    DesignPoint surface_fixed;
    surface_fixed.ec_threshold = 0.5;
    surface_fixed.ood_threshold = 0.9;
    std::string surface_arch = "beta_vae";
    auto* surface = app.add_subcommand("surface", "Risk / failure-probability surface over two parameters");
    add_common(surface, surface_opts);
    surface->add_option("--x-axis", axes.x, "First axis (ec_size|ood_size|ec_threshold|ood_threshold)");
    surface->add_option("--y-axis", axes.y, "Second axis");
    surface->add_option("--nx", axes.nx, "Grid points along x");
    surface->add_option("--ny", axes.ny, "Grid points along y");
    surface->add_option("--ec-size", surface_fixed.ec_size, "Fixed EC size when not an axis");
    surface->add_option("--ood-size", surface_fixed.ood_size, "Fixed monitor size when not an axis");
    surface->add_option("--ec-threshold", surface_fixed.ec_threshold, "Fixed EC threshold when not an axis");
    surface->add_option("--ood-threshold", surface_fixed.ood_threshold, "Fixed monitor threshold when not an axis");
    surface->add_option("--arch", surface_arch, "Monitor architecture");

    std::size_t oc_trials = 10000;
    std::uint64_t oc_seed = 1;
    std::string oc_out;
    auto* oracle = app.add_subcommand("oracle-check",
                                      "Closed-form vs enumeration-oracle divergence diagnostic");
    oracle->add_option("--trials", oc_trials, "Number of random joints");
    oracle->add_option("--seed", oc_seed, "Master seed");
    oracle->add_option("--out", oc_out, "Optional output directory for oracle_check.json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (baseline->parsed()) return cmd_baseline(baseline_opts);
        if (codesign->parsed()) return cmd_codesign(codesign_opts);
        if (grid->parsed()) return cmd_grid(grid_opts, grid_max_evals);
        if (sweep->parsed()) {
            return cmd_sweep(sweep_opts, sweep_ec_size, sweep_ood_size, sweep_arch, sweep_train_seed,
                             sweep_cap);
        }
        if (surface->parsed()) {
            surface_fixed.ood_arch = ood_arch_from_string(surface_arch);
            return cmd_surface(surface_opts, axes, surface_fixed);
        }
        if (oracle->parsed()) return cmd_oracle_check(oc_trials, oc_seed, oc_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
