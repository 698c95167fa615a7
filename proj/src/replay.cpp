#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pond/baselines.hpp"
#include "pond/harness.hpp"
#include "pond/learners.hpp"
#include "pond/stochastic.hpp"

namespace pond {

namespace {

// Pick a proposal server for one arriving job of the given type.
std::size_t argmax_row(const Grid<double>& eta, std::size_t type, RandomStream& ties) {
    std::vector<std::size_t> best;
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < eta.cols(); ++j) {
        if (eta(type, j) > top) {
            top = eta(type, j);
            best.clear();
        }
        if (eta(type, j) == top) best.push_back(j);
    }
    return best.size() == 1 ? best[0] : best[ties.uniform_index(best.size())];
}

}  // namespace

ReplayResult replay_logged(const LoggedDataset& dataset,
                           const std::vector<ConstraintSpec>& constraints,
                           ReplayPolicy policy, const PondParams& params, long horizon,
                           std::uint64_t seed) {
    if (dataset.records.empty()) throw std::invalid_argument("replay: empty dataset");
    if (horizon < 1) throw std::invalid_argument("replay: horizon must be >= 1");
    const std::size_t n = dataset.n_types;
    const std::size_t m = dataset.n_arms;
    const std::size_t k = constraints.size();

    auto draw_rng = derive_stream(seed, {{"draws", 0}});
    auto constraints_rng = derive_stream(seed, {{"constraints", 0}});
    auto ties_rng = derive_stream(seed, {{"ties", 0}});

    ReplayResult out;
    out.record.stats = ArmStats(n, m);
    out.record.queues = QueueState(m, k);
    out.record.slots.reserve(static_cast<std::size_t>(horizon));

    // ETC commit state
    long explore = etc_exploration_slots(n, m, horizon);
    std::vector<double> context_count(n, 0.0);
    std::vector<Grid<double>> weight_sum(k, Grid<double>(n, m, 0.0));
    std::vector<std::vector<double>> rho_sum(k, std::vector<double>(m, 0.0));
    Grid<double> route_cdf;
    bool committed = false;

    double reward_acc = 0.0;
    // acceptance rate is ~1/M under uniform logging; this cap only trips on a
    // policy/dataset mismatch
    const long max_draws = 1000L * static_cast<long>(m) * horizon + 1000000L;

    Grid<double> r_hat(n, m);
    while (out.accepted < horizon) {
        if (out.draws >= max_draws)
            throw std::runtime_error("replay: acceptance stalled; is the logging policy uniform?");
        long t = out.accepted;

        if (policy == ReplayPolicy::Etc && !committed && t >= explore) {
            committed = true;
            double inv = 1.0 / static_cast<double>(explore);
            FluidProblem est;
            for (std::size_t i = 0; i < n; ++i) est.lambda.push_back(context_count[i] * inv);
            est.r = out.record.stats.mean;
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
                out.record.lp_fallback = true;
            } else {
                for (std::size_t i = 0; i < n; ++i) {
                    if (est.lambda[i] <= 0.0) {
                        out.record.uniform_types.push_back(i);
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
                        for (double& v : p) v /= sum;
                    else
                        p[preferred] += 1.0 - sum;
                    double acc = 0.0;
                    for (std::size_t j = 0; j < m; ++j) {
                        acc += p[j];
                        route_cdf(i, j) = acc;
                    }
                }
            }
        }

        const auto& rec = dataset.records[draw_rng.uniform_index(dataset.records.size())];
        out.draws += 1;
        std::size_t type = rec.context_type;

        std::vector<long> arrivals(n, 0L);
        arrivals[type] = 1;

        std::vector<Grid<double>> weights;
        std::vector<std::vector<double>> requirements;
        weights.reserve(k);
        requirements.reserve(k);
        for (std::size_t kk = 0; kk < k; ++kk) {
            auto real = sample_constraint_realization(constraints[kk], arrivals, constraints_rng);
            weights.push_back(std::move(real.weights));
            requirements.push_back(std::move(real.requirements));
        }

        std::size_t proposal;
        switch (policy) {
            case ReplayPolicy::UniformRandom:
                proposal = ties_rng.uniform_index(m);
                break;
            case ReplayPolicy::Pond: {
                for (std::size_t j = 0; j < m; ++j)
                    r_hat(type, j) =
                        params.learner == LearnerKind::Ucb
                            ? ucb_index(out.record.stats.mean(type, j),
                                        out.record.stats.pulls(type, j), horizon)
                            : moss_index(out.record.stats.mean(type, j),
                                         out.record.stats.pulls(type, j), horizon, m);
                Grid<double> eta = compute_weights(r_hat, out.record.queues, weights, params.v);
                proposal = argmax_row(eta, type, ties_rng);
                break;
            }
            case ReplayPolicy::Etc: {
                if (!committed) {
                    for (std::size_t j = 0; j < m; ++j)
                        r_hat(type, j) = ucb_index(out.record.stats.mean(type, j),
                                                   out.record.stats.pulls(type, j), horizon);
                    proposal = argmax_row(r_hat, type, ties_rng);
                } else if (out.record.lp_fallback ||
                           std::find(out.record.uniform_types.begin(),
                                     out.record.uniform_types.end(),
                                     type) != out.record.uniform_types.end()) {
                    proposal = ties_rng.uniform_index(m);
                } else {
                    double u = ties_rng.uniform();
                    proposal = m - 1;
                    for (std::size_t j = 0; j < m; ++j)
                        if (u < route_cdf(type, j)) { proposal = j; break; }
                }
                break;
            }
        }

        if (proposal != rec.logged_arm) continue;  // rejected, t does not advance

        SlotOutcome slot;
        slot.arrivals = arrivals;
        slot.allocation = Grid<long>(n, m, 0L);
        slot.allocation(type, proposal) = 1;
        slot.weights = std::move(weights);
        slot.requirements = std::move(requirements);
        slot.reward_sum = Grid<double>(n, m, 0.0);
        slot.reward_sum(type, proposal) = rec.reward;
        update_stats(out.record.stats, type, proposal, 1, rec.reward);

        if (policy == ReplayPolicy::Etc && !committed) {
            context_count[type] += 1.0;
            for (std::size_t kk = 0; kk < k; ++kk)
                for (std::size_t j = 0; j < m; ++j) {
                    for (std::size_t i = 0; i < n; ++i)
                        weight_sum[kk](i, j) += slot.weights[kk](i, j);
                    rho_sum[kk][j] += slot.requirements[kk][j];
                }
        }

        update_queues(out.record.queues, slot.allocation, slot.weights, slot.requirements,
                      policy == ReplayPolicy::Pond ? params.epsilon : 0.0);
        slot.queues_after = out.record.queues.q;
        out.record.slots.push_back(std::move(slot));

        reward_acc += rec.reward;
        out.accepted += 1;
    }

    out.acceptance_rate = static_cast<double>(out.accepted) / static_cast<double>(out.draws);
    out.avg_accepted_reward = reward_acc / static_cast<double>(out.accepted);
    return out;
}

}  // namespace pond
