#pragma once

#include <cstdint>

#include "pond/grid.hpp"

namespace pond {

// Per (job type, server) pull counts and empirical mean rewards.
struct ArmStats {
    Grid<long> pulls;   // N x M
    Grid<double> mean;  // N x M, 0 when never pulled

    ArmStats() = default;
    ArmStats(std::size_t n_types, std::size_t n_servers)
        : pulls(n_types, n_servers, 0L), mean(n_types, n_servers, 0.0) {}
};

// Empirical mean plus sqrt(ln T / pulls); +inf for an unpulled arm.
double ucb_index(double mean, long pulls, long horizon);

// Empirical mean plus sqrt((2/pulls) * log+(T / (M * pulls))); the inner log
// is clipped at zero, +inf for an unpulled arm.
double moss_index(double mean, long pulls, long horizon, std::size_t n_servers);

// Fold one slot's batch of pulls into the running mean.
void update_stats(ArmStats& stats, std::size_t i, std::size_t j, long batch_count,
                  double batch_reward_sum);

}  // namespace pond
