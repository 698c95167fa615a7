#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "pond/harness.hpp"

namespace {

int effective_threads(int flag) {
    if (flag > 0) return flag;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void apply_overrides(pond::ExperimentConfig& cfg, std::optional<std::uint64_t> seed,
                     const std::string& out_dir) {
    if (seed) cfg.master_seed = *seed;
    if (!out_dir.empty()) cfg.output_dir = out_dir;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained online dispatching simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string dataset_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int threads = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "experiment config (JSON)")->required();
        cmd->add_option("--seed", seed, "override master seed");
        cmd->add_option("--out-dir", out_dir, "override output directory");
        cmd->add_option("--threads", threads, "worker threads (default: hardware)");
    };

    auto* solve = app.add_subcommand("solve-lp", "solve the fluid LP for the config's instance");
    add_common(solve);
    auto* run = app.add_subcommand("run", "run the first (algorithm, epsilon-mode, horizon) cell");
    add_common(run);
    auto* sweep = app.add_subcommand("sweep", "run the full sweep and write CSV outputs");
    add_common(sweep);
    auto* replay = app.add_subcommand("replay", "reject-sampling replay of a logged dataset");
    add_common(replay);
    replay->add_option("dataset", dataset_path, "logged dataset CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = pond::load_config(config_path);
        apply_overrides(cfg, seed, out_dir);

        if (solve->parsed()) {
            std::cout << pond::lp_report_json(cfg.instance) << "\n";
        } else if (run->parsed()) {
            auto cell = pond::run_cell(cfg, cfg.algorithms.front(), cfg.epsilon_modes.front(),
                                       cfg.horizons.front(), effective_threads(threads));
            std::vector<pond::CellResult> cells{cell};
            std::filesystem::create_directories(cfg.output_dir);
            pond::write_aggregate_csv(cfg.output_dir + "/aggregate.csv", cells,
                                      pond::constraint_family_names(cfg.instance));
            if (cell.failed) {
                nlohmann::json err{{"error", cell.error}};
                std::cerr << err.dump() << "\n";
                return 1;
            }
            std::cout << "regret_mean=" << cell.summary.regret_mean
                      << " regret_sem=" << cell.summary.regret_sem << "\n";
        } else if (sweep->parsed()) {
            auto cells = pond::run_sweep(cfg, cfg.output_dir, effective_threads(threads));
            bool any_failed = false;
            for (const auto& c : cells)
                if (c.failed) {
                    any_failed = true;
                    std::cerr << nlohmann::json{{"error", c.error}}.dump() << "\n";
                }
            std::cout << "wrote " << cells.size() << " aggregate rows to " << cfg.output_dir
                      << "\n";
            if (any_failed) return 1;
        } else if (replay->parsed()) {
            if (!cfg.replay)
                throw std::runtime_error("config has no 'replay' section");
            auto ds = pond::load_dataset_csv(dataset_path);
            pond::PondParams params;
            params.learner = cfg.learner;
            params.epsilon = cfg.replay->epsilon;
            params.v = cfg.replay->v;
            auto policy = cfg.replay->algorithm == pond::Algorithm::Pond
                              ? pond::ReplayPolicy::Pond
                              : pond::ReplayPolicy::Etc;
            auto res = pond::replay_logged(ds, cfg.instance.constraints, policy, params,
                                           cfg.replay->horizon, cfg.master_seed);
            nlohmann::ordered_json j;
            j["accepted"] = res.accepted;
            j["draws"] = res.draws;
            j["acceptance_rate"] = res.acceptance_rate;
            j["avg_accepted_reward"] = res.avg_accepted_reward;
            std::cout << j.dump(2) << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
