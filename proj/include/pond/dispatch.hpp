#pragma once

#include <cstdint>
#include <vector>

#include "pond/grid.hpp"
#include "pond/instance.hpp"
#include "pond/learners.hpp"
#include "pond/stochastic.hpp"

namespace pond {

// Virtual queues, one per (server, constraint family).
struct QueueState {
    Grid<double> q;  // M x K

    QueueState() = default;
    QueueState(std::size_t n_servers, std::size_t n_constraints)
        : q(n_servers, n_constraints, 0.0) {}
};

enum class LearnerKind { Ucb, Moss };

struct PondParams {
    double v = 1.0;        // reward/queue trade-off weight
    double epsilon = 0.0;  // queue tightness
    LearnerKind learner = LearnerKind::Ucb;
};

struct SlotOutcome {
    std::vector<long> arrivals;                   // N
    Grid<long> allocation;                        // N x M
    std::vector<Grid<double>> weights;            // K x (N x M)
    std::vector<std::vector<double>> requirements;// K x M
    Grid<double> reward_sum;                      // N x M, realized reward per pair
    Grid<double> queues_after;                    // M x K
};

struct TrialRecord {
    std::vector<SlotOutcome> slots;
    ArmStats stats;
    QueueState queues;
    // ETC bookkeeping; unused by POND trials.
    bool lp_fallback = false;                 // phase-2 LP infeasible, uniform routing
    std::vector<std::size_t> uniform_types;   // types routed uniformly (lambda-hat = 0)
    long explore_slots = 0;
};

// eta_ij = v * r_hat_ij - sum_k W^(k)_ij * Q_j^(k); an infinite index forces
// an infinite weight regardless of the queue terms.
Grid<double> compute_weights(const Grid<double>& r_hat, const QueueState& queues,
                             const std::vector<Grid<double>>& weights, double v);

// Per type, all arrivals go to one argmax server; exact ties (finite or
// infinite) broken uniformly at random.
Grid<long> max_weight_allocate(const Grid<double>& eta, const std::vector<long>& arrivals,
                               RandomStream& tie_stream);

// Q' = max(Q + sum_i W_ij x_ij - rho_j + epsilon, 0) per (j,k).
void update_queues(QueueState& queues, const Grid<long>& allocation,
                   const std::vector<Grid<double>>& weights,
                   const std::vector<std::vector<double>>& requirements, double epsilon);

TrialRecord run_pond_trial(const Instance& inst, const PondParams& params, long horizon,
                           std::uint64_t trial_seed);

}  // namespace pond
