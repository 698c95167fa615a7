#pragma once

#include <cstdint>

#include "pond/dispatch.hpp"
#include "pond/instance.hpp"

namespace pond {

// Explore-Then-Commit: ceil(N*M*ln T) slots of pure UCB dispatch, then one
// fluid-LP solve on the phase-1 estimates and probabilistic routing by
// x_hat*_ij / lambda_hat_i for the rest of the horizon. Queue and violation
// accounting matches the POND trial loop.
TrialRecord run_etc_trial(const Instance& inst, long horizon, std::uint64_t trial_seed);

long etc_exploration_slots(std::size_t n_types, std::size_t n_servers, long horizon);

}  // namespace pond
