#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pond/harness.hpp"

namespace pond {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::runtime_error("config: " + where + ": " + what);
}

void require_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed,
                  const std::set<std::string>& required) {
    if (!obj.is_object()) fail(where, "expected an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) fail(where, "unknown key '" + key + "'");
    for (const auto& key : required)
        if (!obj.contains(key)) fail(where, "missing key '" + key + "'");
}

DistModel parse_model(const json& j, const std::string& where) {
    require_keys(j, where, {"dist", "value", "mean", "d", "values"}, {"dist"});
    std::string dist = j.at("dist").get<std::string>();
    if (dist == "deterministic") return DistModel::deterministic(j.at("value").get<double>());
    if (dist == "bernoulli") return DistModel::bernoulli(j.at("mean").get<double>());
    if (dist == "geometric") return DistModel::geometric(j.at("mean").get<double>());
    if (dist == "negated_arrival_fraction")
        return DistModel::negated_arrival_fraction(j.at("d").get<double>());
    if (dist == "empirical")
        return DistModel::empirical(j.at("values").get<std::vector<double>>());
    fail(where, "unknown distribution '" + dist + "'");
}

ConstraintSpec parse_constraint(const json& j, std::size_t n_types, std::size_t n_servers,
                                const std::string& where) {
    require_keys(j, where, {"kind", "mu", "d", "weights", "requirements", "sign"}, {"kind"});
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "capacity") {
        if (!j.contains("mu")) fail(where, "capacity constraint needs 'mu'");
        std::vector<DistModel> mu;
        for (const auto& e : j.at("mu")) mu.push_back(parse_model(e, where + ".mu"));
        return build_capacity_constraint(n_types, std::move(mu));
    }
    if (kind == "fairness") {
        if (!j.contains("d")) fail(where, "fairness constraint needs 'd'");
        return build_fairness_constraint(n_types, n_servers,
                                         j.at("d").get<std::vector<double>>());
    }
    if (kind == "resource" || kind == "custom") {
        if (!j.contains("weights") || !j.contains("requirements"))
            fail(where, kind + " constraint needs 'weights' and 'requirements'");
        const auto& wj = j.at("weights");
        Grid<DistModel> w(wj.size(), n_servers);
        for (std::size_t i = 0; i < wj.size(); ++i) {
            const auto& row = wj[i];
            if (row.size() != n_servers) fail(where, "weights row size mismatch");
            for (std::size_t jj = 0; jj < n_servers; ++jj) {
                const auto& e = row[jj];
                w(i, jj) = e.is_number() ? DistModel::deterministic(e.get<double>())
                                         : parse_model(e, where + ".weights");
            }
        }
        std::vector<DistModel> rho;
        for (const auto& e : j.at("requirements"))
            rho.push_back(e.is_number() ? DistModel::deterministic(e.get<double>())
                                        : parse_model(e, where + ".requirements"));
        WeightSign sign = WeightSign::AllNonNegative;
        if (j.contains("sign")) {
            std::string s = j.at("sign").get<std::string>();
            if (s == "non_negative") sign = WeightSign::AllNonNegative;
            else if (s == "non_positive") sign = WeightSign::AllNonPositive;
            else fail(where, "unknown sign '" + s + "'");
        }
        auto spec = build_resource_constraint(std::move(w), std::move(rho), sign);
        if (kind == "custom") spec.kind = ConstraintKind::Custom;
        return spec;
    }
    fail(where, "unknown constraint kind '" + kind + "'");
}

Instance parse_instance(const json& j) {
    require_keys(j, "instance",
                 {"arrivals", "reward_means", "reward_dist", "constraints", "c_lambda", "c_u"},
                 {"arrivals", "reward_means", "constraints", "c_lambda", "c_u"});
    Instance inst;
    for (const auto& e : j.at("arrivals"))
        inst.arrival_models.push_back(parse_model(e, "instance.arrivals"));
    inst.n_types = inst.arrival_models.size();

    auto means = j.at("reward_means").get<std::vector<std::vector<double>>>();
    inst.reward_means = Grid<double>::from_rows(means);
    inst.n_servers = inst.reward_means.cols();

    std::string rdist = j.value("reward_dist", std::string("bernoulli"));
    inst.reward_models = Grid<DistModel>(inst.n_types, inst.n_servers);
    for (std::size_t i = 0; i < inst.n_types; ++i)
        for (std::size_t jj = 0; jj < inst.n_servers; ++jj) {
            double mean = inst.reward_means(i, jj);
            if (rdist == "bernoulli") inst.reward_models(i, jj) = DistModel::bernoulli(mean);
            else if (rdist == "deterministic")
                inst.reward_models(i, jj) = DistModel::deterministic(mean);
            else fail("instance.reward_dist", "unknown reward distribution '" + rdist + "'");
        }

    for (const auto& e : j.at("constraints"))
        inst.constraints.push_back(
            parse_constraint(e, inst.n_types, inst.n_servers, "instance.constraints"));
    inst.c_lambda = j.at("c_lambda").get<double>();
    inst.c_u = j.at("c_u").get<double>();
    return inst;
}

Algorithm parse_algorithm(const std::string& s, const std::string& where) {
    if (s == "pond") return Algorithm::Pond;
    if (s == "etc") return Algorithm::Etc;
    fail(where, "unknown algorithm '" + s + "'");
}

EpsilonMode parse_epsilon_mode(const json& j) {
    require_keys(j, "epsilon_modes", {"mode", "c", "value"}, {"mode"});
    std::string mode = j.at("mode").get<std::string>();
    EpsilonMode m;
    if (mode == "zero") m.kind = EpsilonMode::Kind::Zero;
    else if (mode == "over_sqrt_t") {
        m.kind = EpsilonMode::Kind::OverSqrtT;
        m.value = j.at("c").get<double>();
    } else if (mode == "theorem_auto") m.kind = EpsilonMode::Kind::TheoremAuto;
    else if (mode == "fixed") {
        m.kind = EpsilonMode::Kind::Fixed;
        m.value = j.at("value").get<double>();
    } else fail("epsilon_modes", "unknown mode '" + mode + "'");
    return m;
}

VMode parse_v_mode(const json& j) {
    require_keys(j, "v_mode", {"mode", "value"}, {"mode"});
    std::string mode = j.at("mode").get<std::string>();
    VMode m;
    if (mode == "two_sqrt_t") m.kind = VMode::Kind::TwoSqrtT;
    else if (mode == "theorem_auto") m.kind = VMode::Kind::TheoremAuto;
    else if (mode == "fixed") {
        m.kind = VMode::Kind::Fixed;
        m.value = j.at("value").get<double>();
    } else fail("v_mode", "unknown mode '" + mode + "'");
    return m;
}

ReplayConfig parse_replay(const json& j) {
    require_keys(j, "replay", {"algorithm", "horizon", "epsilon", "v"}, {"algorithm", "horizon"});
    ReplayConfig r;
    r.algorithm = parse_algorithm(j.at("algorithm").get<std::string>(), "replay.algorithm");
    r.horizon = j.at("horizon").get<long>();
    r.epsilon = j.value("epsilon", 0.0);
    r.v = j.value("v", 1.0);
    return r;
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("config: parse error: ") + e.what());
    }
    require_keys(j, "config",
                 {"master_seed", "trials", "horizons", "algorithms", "epsilon_modes", "v_mode",
                  "learner", "instance", "output_dir", "write_trials", "replay"},
                 {"master_seed", "trials", "horizons", "algorithms", "epsilon_modes", "v_mode",
                  "instance"});

    ExperimentConfig cfg;
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    cfg.trials = j.at("trials").get<long>();
    if (cfg.trials < 1) fail("trials", "must be >= 1");
    cfg.horizons = j.at("horizons").get<std::vector<long>>();
    if (cfg.horizons.empty()) fail("horizons", "must be non-empty");
    for (long t : cfg.horizons)
        if (t < 1) fail("horizons", "must be positive");

    for (const auto& e : j.at("algorithms"))
        cfg.algorithms.push_back(parse_algorithm(e.get<std::string>(), "algorithms"));
    if (cfg.algorithms.empty()) fail("algorithms", "must be non-empty");
    for (const auto& e : j.at("epsilon_modes")) cfg.epsilon_modes.push_back(parse_epsilon_mode(e));
    if (cfg.epsilon_modes.empty()) fail("epsilon_modes", "must be non-empty");
    cfg.v_mode = parse_v_mode(j.at("v_mode"));

    std::string learner = j.value("learner", std::string("ucb"));
    if (learner == "ucb") cfg.learner = LearnerKind::Ucb;
    else if (learner == "moss") cfg.learner = LearnerKind::Moss;
    else fail("learner", "unknown learner '" + learner + "'");

    cfg.instance = parse_instance(j.at("instance"));
    auto report = validate_instance(cfg.instance);
    if (!report.ok()) fail("instance", report.errors.front());

    cfg.output_dir = j.value("output_dir", std::string("out"));
    cfg.write_trials = j.value("write_trials", false);
    if (j.contains("replay")) cfg.replay = parse_replay(j.at("replay"));
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_json(buf.str());
}

}  // namespace pond
