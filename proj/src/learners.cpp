#include "pond/learners.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace pond {

double ucb_index(double mean, long pulls, long horizon) {
    if (horizon < 2) throw std::invalid_argument("ucb_index: horizon must be >= 2");
    if (pulls == 0) return std::numeric_limits<double>::infinity();
    return mean + std::sqrt(std::log(static_cast<double>(horizon)) /
                            static_cast<double>(pulls));
}

double moss_index(double mean, long pulls, long horizon, std::size_t n_servers) {
    if (horizon < 2) throw std::invalid_argument("moss_index: horizon must be >= 2");
    if (n_servers < 1) throw std::invalid_argument("moss_index: n_servers must be >= 1");
    if (pulls == 0) return std::numeric_limits<double>::infinity();
    double ratio = static_cast<double>(horizon) /
                   (static_cast<double>(n_servers) * static_cast<double>(pulls));
    double inner = std::max(std::log(ratio), 0.0);
    return mean + std::sqrt(2.0 / static_cast<double>(pulls) * inner);
}

void update_stats(ArmStats& stats, std::size_t i, std::size_t j, long batch_count,
                  double batch_reward_sum) {
    if (batch_count < 0) throw std::invalid_argument("update_stats: negative batch count");
    if (batch_reward_sum < 0.0 || batch_reward_sum > static_cast<double>(batch_count))
        throw std::invalid_argument("update_stats: reward sum out of [0, batch_count]");
    if (batch_count == 0) return;
    long pulls = stats.pulls(i, j);
    long pulls_after = pulls + batch_count;
    stats.mean(i, j) =
        (stats.mean(i, j) * static_cast<double>(pulls) + batch_reward_sum) /
        static_cast<double>(pulls_after);
    stats.pulls(i, j) = pulls_after;
}

}  // namespace pond
