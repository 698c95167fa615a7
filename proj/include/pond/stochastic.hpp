#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pond/grid.hpp"
#include "pond/instance.hpp"

namespace pond {

using SeedLabel = std::pair<std::string, std::uint64_t>;

// Single-owner uniform generator; trials hold disjoint streams.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return uni_(eng_); }  // [0,1)
    std::uint64_t next_u64() { return eng_(); }

    // uniform integer in [0, n)
    std::size_t uniform_index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(eng_);
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
    std::uniform_real_distribution<double> uni_{0.0, 1.0};
};

// Pure function of (master_seed, labels); distinct label paths give
// independent-behaving streams.
std::uint64_t derive_seed(std::uint64_t master_seed, const std::vector<SeedLabel>& labels);
RandomStream derive_stream(std::uint64_t master_seed, const std::vector<SeedLabel>& labels);

std::vector<long> sample_arrivals(const std::vector<DistModel>& models, RandomStream& stream);

std::vector<double> sample_rewards(const DistModel& model, long count, RandomStream& stream);

struct ConstraintRealization {
    Grid<double> weights;             // N x M
    std::vector<double> requirements; // M
};

// Fairness requirements observe this slot's realized arrivals.
ConstraintRealization sample_constraint_realization(const ConstraintSpec& spec,
                                                    const std::vector<long>& arrivals,
                                                    RandomStream& stream);

}  // namespace pond
