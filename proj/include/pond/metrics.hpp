#pragma once

#include <string>
#include <vector>

#include "pond/dispatch.hpp"
#include "pond/grid.hpp"

namespace pond {

struct TrialMetrics {
    // cumulative trajectories, index t = after slot t (length T)
    std::vector<double> expected_reward;       // sum of true-mean reward
    std::vector<double> regret;                // t * opt_per_slot - expected_reward
    std::vector<Grid<double>> violation_signed;// per slot: M x K cumulative signed violation
    Grid<double> violation_positive_part;      // M x K, positive part at horizon
    double realized_reward_total = 0.0;        // for replay, where true means are absent
};

// True means for the reward term (the realized rewards are tracked separately);
// realized weights/requirements for violations.
TrialMetrics compute_metrics(const TrialRecord& trial, const Grid<double>& true_r,
                             double lp_opt_per_slot);

struct FamilySummary {
    std::string family;
    double violation_max_signed = 0.0;  // max over servers of across-trial mean at horizon
    double violation_pospart = 0.0;     // sum over servers of (mean signed)^+
};

struct AggregateSummary {
    std::size_t n_trials = 0;
    double regret_mean = 0.0;
    double regret_sem = 0.0;  // sd/sqrt(n) with n-1 denominator; 0 for a single trial
    std::vector<FamilySummary> families;
};

AggregateSummary aggregate(const std::vector<TrialMetrics>& trials,
                           const std::vector<std::string>& family_names);

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    bool constant_fit = false;  // all values equal; r_squared reported as 0
};

// OLS of value against sqrt(T).
ScalingFit fit_scaling(const std::vector<std::pair<long, double>>& points);

}  // namespace pond
