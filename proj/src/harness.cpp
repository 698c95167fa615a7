#include "pond/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <tuple>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pond/baselines.hpp"
#include "pond/stochastic.hpp"

namespace pond {

std::string to_string(Algorithm a) { return a == Algorithm::Pond ? "pond" : "etc"; }

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

TheoremParams theorem_for(const Instance& inst, long horizon) {
    return theorem_params(fluid_from_instance(inst), horizon, inst.c_lambda, inst.c_u);
}

// Trajectories are dropped once the per-trial horizon values are extracted,
// so a long sweep does not hold full traces for every trial.
TrialMetrics compact(TrialMetrics&& m) {
    TrialMetrics slim;
    slim.expected_reward = {m.expected_reward.back()};
    slim.regret = {m.regret.back()};
    slim.violation_signed = {m.violation_signed.back()};
    slim.violation_positive_part = std::move(m.violation_positive_part);
    slim.realized_reward_total = m.realized_reward_total;
    return slim;
}

}  // namespace

std::string EpsilonMode::label() const {
    switch (kind) {
        case Kind::Zero: return "zero";
        case Kind::OverSqrtT: {
            std::ostringstream os;
            os << fmt(value) << "/sqrtT";
            return os.str();
        }
        case Kind::TheoremAuto: return "theorem";
        case Kind::Fixed: return "fixed(" + fmt(value) + ")";
    }
    return "?";
}

double EpsilonMode::resolve(long horizon, const Instance& inst) const {
    switch (kind) {
        case Kind::Zero: return 0.0;
        case Kind::OverSqrtT: return value / std::sqrt(static_cast<double>(horizon));
        case Kind::TheoremAuto: return theorem_for(inst, horizon).epsilon;
        case Kind::Fixed: return value;
    }
    return 0.0;
}

double VMode::resolve(long horizon, const Instance& inst) const {
    switch (kind) {
        case Kind::TwoSqrtT: return 2.0 * std::sqrt(static_cast<double>(horizon));
        case Kind::TheoremAuto: return theorem_for(inst, horizon).v;
        case Kind::Fixed: return value;
    }
    return 0.0;
}

std::vector<std::string> constraint_family_names(const Instance& inst) {
    std::map<std::string, int> counts;
    for (const auto& c : inst.constraints) counts[to_string(c.kind)]++;
    std::map<std::string, int> seen;
    std::vector<std::string> names;
    for (const auto& c : inst.constraints) {
        std::string base = to_string(c.kind);
        if (counts[base] > 1)
            names.push_back(base + std::to_string(seen[base]++));
        else
            names.push_back(base);
    }
    return names;
}

CellResult run_cell(const ExperimentConfig& cfg, Algorithm algo, const EpsilonMode& eps_mode,
                    long horizon, int threads) {
    CellResult cell;
    cell.algorithm = algo;
    cell.epsilon_mode = algo == Algorithm::Etc ? "none" : eps_mode.label();
    cell.horizon = horizon;

    try {
        PondParams params;
        params.learner = cfg.learner;
        if (algo == Algorithm::Pond) {
            params.epsilon = eps_mode.resolve(horizon, cfg.instance);
            params.v = cfg.v_mode.resolve(horizon, cfg.instance);
            cell.v = params.v;
            cell.epsilon = params.epsilon;
        }

        auto lp = solve_fluid_lp(fluid_from_instance(cfg.instance));
        if (lp.status != LpStatus::Optimal)
            throw std::runtime_error("fluid LP infeasible for instance");
        double opt_per_slot = lp.objective;

        const long n_trials = cfg.trials;
        std::vector<TrialMetrics> metrics(n_trials);
        std::vector<std::string> errors(n_trials);
        std::atomic<long> next{0};

        auto worker = [&] {
            for (;;) {
                long idx = next.fetch_add(1);
                if (idx >= n_trials) return;
                try {
                    std::uint64_t seed = derive_seed(
                        cfg.master_seed,
                        {{"algo", static_cast<std::uint64_t>(algo)},
                         {"eps_kind",
                          algo == Algorithm::Etc
                              ? 0
                              : static_cast<std::uint64_t>(eps_mode.kind)},
                         {"eps_val",
                          algo == Algorithm::Etc
                              ? 0
                              : std::bit_cast<std::uint64_t>(eps_mode.value)},
                         {"T", static_cast<std::uint64_t>(horizon)},
                         {"trial", static_cast<std::uint64_t>(idx)}});
                    TrialRecord rec = algo == Algorithm::Pond
                                          ? run_pond_trial(cfg.instance, params, horizon, seed)
                                          : run_etc_trial(cfg.instance, horizon, seed);
                    metrics[idx] =
                        compact(compute_metrics(rec, cfg.instance.reward_means, opt_per_slot));
                } catch (const std::exception& e) {
                    errors[idx] = e.what();
                }
            }
        };

        int n_threads = std::max(threads, 1);
        std::vector<std::thread> pool;
        for (int w = 1; w < n_threads; ++w) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();

        for (const auto& e : errors)
            if (!e.empty()) throw std::runtime_error("trial failed: " + e);

        cell.summary = aggregate(metrics, constraint_family_names(cfg.instance));
        cell.trial_regrets.reserve(n_trials);
        for (const auto& m : metrics) cell.trial_regrets.push_back(m.regret.back());
    } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
    }
    return cell;
}

std::vector<CellResult> run_sweep(const ExperimentConfig& cfg, const std::string& out_dir,
                                  int threads) {
    struct Key {
        std::string algo;
        std::string eps;
        long horizon;
        Algorithm a;
        const EpsilonMode* mode;
        bool operator<(const Key& o) const {
            return std::tie(algo, eps, horizon) < std::tie(o.algo, o.eps, o.horizon);
        }
    };
    std::vector<Key> keys;
    for (const auto& a : cfg.algorithms) {
        if (a == Algorithm::Etc) {
            for (long t : cfg.horizons) keys.push_back({"etc", "none", t, a, nullptr});
        } else {
            for (const auto& em : cfg.epsilon_modes)
                for (long t : cfg.horizons) keys.push_back({"pond", em.label(), t, a, &em});
        }
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end(),
                           [](const Key& x, const Key& y) {
                               return x.algo == y.algo && x.eps == y.eps && x.horizon == y.horizon;
                           }),
               keys.end());

    EpsilonMode none;
    std::vector<CellResult> cells;
    for (const auto& key : keys)
        cells.push_back(run_cell(cfg, key.a, key.mode ? *key.mode : none, key.horizon, threads));

    std::filesystem::create_directories(out_dir);
    write_aggregate_csv(out_dir + "/aggregate.csv", cells, constraint_family_names(cfg.instance));
    if (cfg.write_trials) write_trials_csv(out_dir + "/trials.csv", cells);
    std::ofstream lp(out_dir + "/lp.json");
    lp << lp_report_json(cfg.instance) << "\n";
    return cells;
}

std::string lp_report_json(const Instance& inst) {
    auto problem = fluid_from_instance(inst);
    auto sol = solve_fluid_lp(problem);
    auto slater = slater_margin(problem);

    nlohmann::ordered_json j;
    j["status"] = sol.status == LpStatus::Optimal ? "optimal" : "infeasible";
    if (sol.status == LpStatus::Optimal) {
        std::vector<std::vector<double>> x(inst.n_types, std::vector<double>(inst.n_servers));
        for (std::size_t i = 0; i < inst.n_types; ++i)
            for (std::size_t jj = 0; jj < inst.n_servers; ++jj) x[i][jj] = sol.x_star(i, jj);
        j["x_star"] = x;
        j["objective"] = sol.objective;
    }
    j["delta"] = slater.status == LpStatus::Optimal ? slater.delta : -1.0;
    return j.dump(2);
}

void write_aggregate_csv(const std::string& path, const std::vector<CellResult>& cells,
                         const std::vector<std::string>& families) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "algorithm,epsilon_mode,T,V,epsilon,regret_mean,regret_sem";
    for (const auto& f : families)
        out << "," << f << "_violation_max_signed," << f << "_violation_pospart";
    out << ",status\r\n";
    for (const auto& c : cells) {
        out << to_string(c.algorithm) << "," << c.epsilon_mode << "," << c.horizon << ","
            << fmt(c.v) << "," << fmt(c.epsilon);
        if (c.failed) {
            out << ",,";
            for (std::size_t i = 0; i < families.size(); ++i) out << ",,";
            out << ",failed:" << c.error;
        } else {
            out << "," << fmt(c.summary.regret_mean) << "," << fmt(c.summary.regret_sem);
            for (const auto& f : c.summary.families)
                out << "," << fmt(f.violation_max_signed) << "," << fmt(f.violation_pospart);
            out << ",ok";
        }
        out << "\r\n";
    }
}

void write_trials_csv(const std::string& path, const std::vector<CellResult>& cells) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "algorithm,epsilon_mode,T,trial,regret\r\n";
    for (const auto& c : cells) {
        if (c.failed) continue;
        for (std::size_t i = 0; i < c.trial_regrets.size(); ++i)
            out << to_string(c.algorithm) << "," << c.epsilon_mode << "," << c.horizon << "," << i
                << "," << fmt(c.trial_regrets[i]) << "\r\n";
    }
}

double LoggedDataset::mean_reward() const {
    double s = 0.0;
    for (const auto& r : records) s += r.reward;
    return records.empty() ? 0.0 : s / static_cast<double>(records.size());
}

LoggedDataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty dataset " + path);
    // tolerate a trailing \r from CRLF files
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "context_type,logged_arm,reward")
        throw std::runtime_error("dataset header must be context_type,logged_arm,reward");

    LoggedDataset ds;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
            throw std::runtime_error("malformed dataset row: " + line);
        LoggedRecord rec;
        rec.context_type = std::stoul(a);
        rec.logged_arm = std::stoul(b);
        rec.reward = std::stod(c);
        if (rec.reward < 0.0 || rec.reward > 1.0)
            throw std::runtime_error("dataset reward out of [0,1]: " + line);
        ds.n_types = std::max(ds.n_types, rec.context_type + 1);
        ds.n_arms = std::max(ds.n_arms, rec.logged_arm + 1);
        ds.records.push_back(rec);
    }
    if (ds.records.empty()) throw std::runtime_error("dataset has no records");
    return ds;
}

}  // namespace pond
