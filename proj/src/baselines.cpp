#include "pond/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pond/fluid_lp.hpp"
#include "pond/learners.hpp"
#include "pond/stochastic.hpp"

namespace pond {

long etc_exploration_slots(std::size_t n_types, std::size_t n_servers, long horizon) {
    return static_cast<long>(std::ceil(static_cast<double>(n_types * n_servers) *
                                       std::log(static_cast<double>(horizon))));
}

TrialRecord run_etc_trial(const Instance& inst, long horizon, std::uint64_t trial_seed) {
    if (horizon < 1) throw std::invalid_argument("run_etc_trial: horizon must be >= 1");
    auto report = validate_instance(inst);
    if (!report.ok())
        throw std::invalid_argument("run_etc_trial: invalid instance: " + report.errors.front());

    const std::size_t n = inst.n_types;
    const std::size_t m = inst.n_servers;
    const std::size_t k = inst.n_constraints();

    // same stream layout as the POND trial, so paired seeds see paired samples
    auto arrivals_rng = derive_stream(trial_seed, {{"arrivals", 0}});
    auto rewards_rng = derive_stream(trial_seed, {{"rewards", 0}});
    auto constraints_rng = derive_stream(trial_seed, {{"constraints", 0}});
    auto ties_rng = derive_stream(trial_seed, {{"ties", 0}});

    TrialRecord rec;
    rec.stats = ArmStats(n, m);
    rec.queues = QueueState(m, k);
    rec.slots.reserve(static_cast<std::size_t>(horizon));
    rec.explore_slots = std::min(etc_exploration_slots(n, m, horizon), horizon);

    // phase-1 sample means for lambda, weights, requirements
    std::vector<double> arrival_sum(n, 0.0);
    std::vector<Grid<double>> weight_sum(k, Grid<double>(n, m, 0.0));
    std::vector<std::vector<double>> rho_sum(k, std::vector<double>(m, 0.0));

    // phase-2 routing: per type, cumulative server probabilities
    Grid<double> route_cdf;
    bool committed = false;

    Grid<double> r_hat(n, m);
    for (long t = 0; t < horizon; ++t) {
        if (!committed && t >= rec.explore_slots) {
            committed = true;
            double inv = 1.0 / static_cast<double>(rec.explore_slots);
            FluidProblem est;
            for (std::size_t i = 0; i < n; ++i) est.lambda.push_back(arrival_sum[i] * inv);
            est.r = rec.stats.mean;
            for (std::size_t kk = 0; kk < k; ++kk) {
                Grid<double> w(n, m);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < m; ++j) w(i, j) = weight_sum[kk](i, j) * inv;
                std::vector<double> rho(m);
                for (std::size_t j = 0; j < m; ++j) rho[j] = rho_sum[kk][j] * inv;
                est.w.push_back(std::move(w));
                est.rho.push_back(std::move(rho));
            }

            auto sol = solve_fluid_lp(est);
            route_cdf = Grid<double>(n, m, 0.0);
            if (sol.status != LpStatus::Optimal) {
                rec.lp_fallback = true;
            } else {
                for (std::size_t i = 0; i < n; ++i) {
                    if (est.lambda[i] <= 0.0) {
                        rec.uniform_types.push_back(i);
                        continue;
                    }
                    std::vector<double> p(m);
                    double sum = 0.0;
                    std::size_t preferred = 0;
                    for (std::size_t j = 0; j < m; ++j) {
                        p[j] = sol.x_star(i, j) / est.lambda[i];
                        sum += p[j];
                        if (sol.x_star(i, j) > sol.x_star(i, preferred)) preferred = j;
                    }
                    if (sum > 1.0)
                        for (double& v : p) v /= sum;  // estimation noise
                    else
                        p[preferred] += 1.0 - sum;     // residual mass
                    double acc = 0.0;
                    for (std::size_t j = 0; j < m; ++j) {
                        acc += p[j];
                        route_cdf(i, j) = acc;
                    }
                }
            }
        }

        SlotOutcome slot;
        slot.arrivals = sample_arrivals(inst.arrival_models, arrivals_rng);
        slot.weights.reserve(k);
        slot.requirements.reserve(k);
        for (std::size_t kk = 0; kk < k; ++kk) {
            auto real =
                sample_constraint_realization(inst.constraints[kk], slot.arrivals, constraints_rng);
            slot.weights.push_back(std::move(real.weights));
            slot.requirements.push_back(std::move(real.requirements));
        }

        slot.allocation = Grid<long>(n, m, 0L);
        if (!committed) {
            // pure UCB dispatch, no queue terms
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    r_hat(i, j) = ucb_index(rec.stats.mean(i, j), rec.stats.pulls(i, j), horizon);
            slot.allocation = max_weight_allocate(r_hat, slot.arrivals, ties_rng);
            for (std::size_t i = 0; i < n; ++i)
                arrival_sum[i] += static_cast<double>(slot.arrivals[i]);
            for (std::size_t kk = 0; kk < k; ++kk)
                for (std::size_t j = 0; j < m; ++j) {
                    for (std::size_t i = 0; i < n; ++i)
                        weight_sum[kk](i, j) += slot.weights[kk](i, j);
                    rho_sum[kk][j] += slot.requirements[kk][j];
                }
        } else {
            bool uniform_all = rec.lp_fallback;
            for (std::size_t i = 0; i < n; ++i) {
                bool uniform = uniform_all ||
                               std::find(rec.uniform_types.begin(), rec.uniform_types.end(), i) !=
                                   rec.uniform_types.end();
                for (long s = 0; s < slot.arrivals[i]; ++s) {
                    std::size_t j;
                    if (uniform) {
                        j = ties_rng.uniform_index(m);
                    } else {
                        double u = ties_rng.uniform();
                        j = m - 1;
                        for (std::size_t jj = 0; jj < m; ++jj)
                            if (u < route_cdf(i, jj)) { j = jj; break; }
                    }
                    slot.allocation(i, j) += 1;
                }
            }
        }

        slot.reward_sum = Grid<double>(n, m, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                long count = slot.allocation(i, j);
                if (count == 0) continue;
                auto draws = sample_rewards(inst.reward_models(i, j), count, rewards_rng);
                double sum = std::accumulate(draws.begin(), draws.end(), 0.0);
                slot.reward_sum(i, j) = sum;
                update_stats(rec.stats, i, j, count, sum);
            }

        update_queues(rec.queues, slot.allocation, slot.weights, slot.requirements, 0.0);
        slot.queues_after = rec.queues.q;
        rec.slots.push_back(std::move(slot));
    }
    return rec;
}

}  // namespace pond
