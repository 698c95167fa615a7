#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pond/dispatch.hpp"
#include "pond/fluid_lp.hpp"
#include "pond/instance.hpp"
#include "pond/metrics.hpp"

namespace pond {

enum class Algorithm { Pond, Etc };

std::string to_string(Algorithm a);

struct EpsilonMode {
    enum class Kind { Zero, OverSqrtT, TheoremAuto, Fixed };
    Kind kind = Kind::Zero;
    double value = 0.0;  // c for OverSqrtT, epsilon for Fixed

    std::string label() const;
    double resolve(long horizon, const Instance& inst) const;
};

struct VMode {
    enum class Kind { TwoSqrtT, TheoremAuto, Fixed };
    Kind kind = Kind::TwoSqrtT;
    double value = 0.0;

    double resolve(long horizon, const Instance& inst) const;
};

struct ReplayConfig {
    Algorithm algorithm = Algorithm::Pond;
    long horizon = 10000;
    double epsilon = 0.0;
    double v = 1.0;
};

struct ExperimentConfig {
    std::uint64_t master_seed = 0;
    long trials = 1;
    std::vector<long> horizons;
    std::vector<Algorithm> algorithms;
    std::vector<EpsilonMode> epsilon_modes;
    VMode v_mode;
    LearnerKind learner = LearnerKind::Ucb;
    Instance instance;
    std::string output_dir = "out";
    bool write_trials = false;
    std::optional<ReplayConfig> replay;
};

// Strict-schema JSON config loader: unknown keys are rejected, the embedded
// instance is structurally validated.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_json(const std::string& text);

// Distinct per-family CSV column prefixes (kind name, index suffix on repeats).
std::vector<std::string> constraint_family_names(const Instance& inst);

struct CellResult {
    Algorithm algorithm;
    std::string epsilon_mode;
    long horizon = 0;
    double v = 0.0;
    double epsilon = 0.0;
    AggregateSummary summary;
    std::vector<double> trial_regrets;  // per trial, at horizon
    bool failed = false;
    std::string error;
};

// One (algorithm, epsilon-mode, horizon) cell; trials run on `threads` workers
// with seeds derived from the master seed and cell identity.
CellResult run_cell(const ExperimentConfig& cfg, Algorithm algo, const EpsilonMode& eps_mode,
                    long horizon, int threads);

// Full sweep; writes aggregate.csv, optional trials.csv, and lp.json into
// out_dir. Row order is deterministic regardless of execution order.
std::vector<CellResult> run_sweep(const ExperimentConfig& cfg, const std::string& out_dir,
                                  int threads);

std::string lp_report_json(const Instance& inst);

void write_aggregate_csv(const std::string& path, const std::vector<CellResult>& cells,
                         const std::vector<std::string>& families);
void write_trials_csv(const std::string& path, const std::vector<CellResult>& cells);

// --- logged-data replay -------------------------------------------------

struct LoggedRecord {
    std::size_t context_type = 0;
    std::size_t logged_arm = 0;
    double reward = 0.0;
};

struct LoggedDataset {
    std::vector<LoggedRecord> records;
    std::size_t n_types = 0;
    std::size_t n_arms = 0;

    double mean_reward() const;
};

// CSV with header context_type,logged_arm,reward; uniform logging assumed.
LoggedDataset load_dataset_csv(const std::string& path);

enum class ReplayPolicy { Pond, Etc, UniformRandom };

struct ReplayResult {
    TrialRecord record;       // accepted slots only
    long draws = 0;
    long accepted = 0;
    double acceptance_rate = 0.0;
    double avg_accepted_reward = 0.0;
};

// Bootstrap reject-sampling replay: records drawn uniformly with replacement,
// one arrival per slot; a draw is accepted only when the policy's proposed arm
// matches the logged arm, and only accepted draws advance time.
ReplayResult replay_logged(const LoggedDataset& dataset,
                           const std::vector<ConstraintSpec>& constraints,
                           ReplayPolicy policy, const PondParams& params, long horizon,
                           std::uint64_t seed);

}  // namespace pond
