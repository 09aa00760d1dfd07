#include "rcd/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rcd/error.hpp"

namespace rcd {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ValidationError(path + ": " + what);
}

const json& member(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing required key");
    return *it;
}

double get_number(const json& obj, const std::string& path, const std::string& key) {
    const json& v = member(obj, path, key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

double get_number_or(const json& obj, const std::string& path, const std::string& key, double dflt) {
    if (!obj.is_object() || !obj.contains(key)) return dflt;
    return get_number(obj, path, key);
}

std::uint64_t get_u64_or(const json& obj, const std::string& path, const std::string& key,
                         std::uint64_t dflt) {
    if (!obj.is_object() || !obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned()) fail(path + "." + key, "expected an integer");
    return v.get<std::uint64_t>();
}

ScoreCurve parse_score_curve(const json& obj, const std::string& path, ScoreCurve dflt) {
    if (!obj.is_object()) fail(path, "expected an object");
    ScoreCurve c = dflt;
    c.d_max = get_number_or(obj, path, "d_max", c.d_max);
    c.s_half = get_number_or(obj, path, "s_half", c.s_half);
    return c;
}

LatencyCurve parse_latency_curve(const json& obj, const std::string& path, LatencyCurve dflt) {
    if (!obj.is_object()) fail(path, "expected an object");
    LatencyCurve c = dflt;
    c.base_ms = get_number_or(obj, path, "base_ms", c.base_ms);
    c.quad_ms_per_px2 = get_number_or(obj, path, "quad_ms_per_px2", c.quad_ms_per_px2);
    c.sigma = get_number_or(obj, path, "sigma", c.sigma);
    return c;
}

void parse_backend(const json& obj, const std::string& path, BackendCoefficients& b) {
    if (!obj.is_object()) fail(path, "expected an object");
    if (obj.contains("ec_score")) b.ec_score = parse_score_curve(obj.at("ec_score"), path + ".ec_score", b.ec_score);
    b.ec_kappa = get_number_or(obj, path, "ec_kappa", b.ec_kappa);
    b.ec_sigma_train = get_number_or(obj, path, "ec_sigma_train", b.ec_sigma_train);
    if (obj.contains("ood_score_beta_vae")) {
        b.ood_score_beta_vae =
            parse_score_curve(obj.at("ood_score_beta_vae"), path + ".ood_score_beta_vae", b.ood_score_beta_vae);
    }
    if (obj.contains("ood_score_reconstruction")) {
        b.ood_score_reconstruction = parse_score_curve(
            obj.at("ood_score_reconstruction"), path + ".ood_score_reconstruction", b.ood_score_reconstruction);
    }
    b.ood_kappa = get_number_or(obj, path, "ood_kappa", b.ood_kappa);
    b.ood_sigma_train = get_number_or(obj, path, "ood_sigma_train", b.ood_sigma_train);
    if (obj.contains("ec_latency")) {
        b.ec_latency = parse_latency_curve(obj.at("ec_latency"), path + ".ec_latency", b.ec_latency);
    }
    b.ec_pos_time_factor = get_number_or(obj, path, "ec_pos_time_factor", b.ec_pos_time_factor);
    if (obj.contains("ood_latency")) {
        b.ood_latency = parse_latency_curve(obj.at("ood_latency"), path + ".ood_latency", b.ood_latency);
    }
    b.ood_reconstruction_time_factor =
        get_number_or(obj, path, "ood_reconstruction_time_factor", b.ood_reconstruction_time_factor);
}

void parse_space(const json& obj, const std::string& path, DesignSpace& s) {
    if (!obj.is_object()) fail(path, "expected an object");
    auto parse_bounds = [&](const char* key, double& lo, double& hi) {
        if (!obj.contains(key)) return;
        const json& v = obj.at(key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            fail(path + "." + key, "expected [lo, hi]");
        }
        lo = v[0].get<double>();
        hi = v[1].get<double>();
    };
    parse_bounds("ec_size", s.ec_size_lo, s.ec_size_hi);
    parse_bounds("ood_size", s.ood_size_lo, s.ood_size_hi);
    if (obj.contains("archs")) {
        const json& v = obj.at("archs");
        if (!v.is_array() || v.empty()) fail(path + ".archs", "expected a nonempty array");
        s.arch_levels.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_string()) fail(path + ".archs[" + std::to_string(i) + "]", "expected a string");
            try {
                s.arch_levels.push_back(ood_arch_from_string(v[i].get<std::string>()));
            } catch (const ValidationError& e) {
                fail(path + ".archs[" + std::to_string(i) + "]", e.what());
            }
        }
    }
    s.n_partitions = static_cast<int>(get_number_or(obj, path, "n_partitions", s.n_partitions));
}

void parse_optimizer(const json& obj, const std::string& path, OptimizerConfig& c) {
    if (!obj.is_object()) fail(path, "expected an object");
    c.n_init = static_cast<int>(get_number_or(obj, path, "n_init", c.n_init));
    c.penalty_risk = get_number_or(obj, path, "penalty_risk", c.penalty_risk);
    c.patience = static_cast<int>(get_number_or(obj, path, "patience", c.patience));
    c.ei_xi = get_number_or(obj, path, "ei_xi", c.ei_xi);
    c.cg_restarts = static_cast<int>(get_number_or(obj, path, "cg_restarts", c.cg_restarts));
    c.cg_max_iter = static_cast<int>(get_number_or(obj, path, "cg_max_iter", c.cg_max_iter));
    c.max_iterations = static_cast<int>(get_number_or(obj, path, "max_iterations", c.max_iterations));
    c.sweep_cap = static_cast<std::size_t>(get_number_or(obj, path, "sweep_cap",
                                                         static_cast<double>(c.sweep_cap)));
    c.seed = get_u64_or(obj, path, "seed", c.seed);
}

} // namespace

LoadedConfig load_scenario_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("scenario: invalid JSON: ") + e.what());
    }
    const std::string path = "scenario";
    if (!doc.is_object()) fail(path, "expected a JSON object");

    LoadedConfig cfg;
    Scenario& sc = cfg.scenario;
    if (doc.contains("id")) {
        if (!doc.at("id").is_string()) fail(path + ".id", "expected a string");
        sc.id = doc.at("id").get<std::string>();
    }
    sc.p_pos = get_number(doc, path, "p_pos");
    sc.ood_fraction = get_number(doc, path, "ood_fraction");
    sc.n_samples = static_cast<std::size_t>(get_number(doc, path, "n_samples"));
    sc.period_ms = get_number(doc, path, "period_ms");
    {
        const json& sev = member(doc, path, "severities");
        sc.severities.e0 = get_number(sev, path + ".severities", "e0");
        sc.severities.e1 = get_number(sev, path + ".severities", "e1");
    }
    if (doc.contains("backend")) parse_backend(doc.at("backend"), path + ".backend", sc.backend);
    if (doc.contains("space")) parse_space(doc.at("space"), path + ".space", sc.space);
    sc.master_seed = get_u64_or(doc, path, "master_seed", sc.master_seed);
    if (doc.contains("optimizer")) parse_optimizer(doc.at("optimizer"), path + ".optimizer", cfg.optimizer);

    try {
        sc.validate();
        cfg.optimizer.validate(sc.severities);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("scenario: ") + e.what());
    }
    return cfg;
}

LoadedConfig load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_scenario_json(ss.str());
}

namespace {

json record_to_json_obj(const EvaluationRecord& rec) {
    json j;
    j["iteration"] = rec.iteration;
    j["partition"] = rec.partition_id;
    j["ec_size"] = rec.design.ec_size;
    j["ec_threshold"] = rec.design.ec_threshold;
    j["ood_size"] = rec.design.ood_size;
    j["ood_threshold"] = rec.design.ood_threshold;
    j["ood_arch"] = to_string(rec.design.ood_arch);
    j["risk"] = rec.risk;
    j["p_e0"] = rec.p_e0;
    j["p_e1"] = rec.p_e1;
    j["utilization"] = rec.utilization;
    j["feasible"] = rec.feasible;
    j["train_seed"] = rec.train_seed;
    return j;
}

} // namespace

std::string evaluation_record_to_json(const EvaluationRecord& rec) {
    return record_to_json_obj(rec).dump(2) + "\n";
}

std::string baseline_result_to_json(const BaselineResult& res) {
    json j;
    j["record"] = record_to_json_obj(res.record);
    j["u_base"] = res.u_base;
    return j.dump(2) + "\n";
}

} // namespace rcd
