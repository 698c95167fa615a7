#include "pond/dispatch.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pond {

Grid<double> compute_weights(const Grid<double>& r_hat, const QueueState& queues,
                             const std::vector<Grid<double>>& weights, double v) {
    const std::size_t n = r_hat.rows();
    const std::size_t m = r_hat.cols();
    Grid<double> eta(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (std::isinf(r_hat(i, j))) {
                eta(i, j) = std::numeric_limits<double>::infinity();
                continue;
            }
            double queue_term = 0.0;
            for (std::size_t k = 0; k < weights.size(); ++k)
                queue_term += weights[k](i, j) * queues.q(j, k);
            eta(i, j) = v * r_hat(i, j) - queue_term;
        }
    return eta;
}

Grid<long> max_weight_allocate(const Grid<double>& eta, const std::vector<long>& arrivals,
                               RandomStream& tie_stream) {
    const std::size_t n = eta.rows();
    const std::size_t m = eta.cols();
    Grid<long> x(n, m, 0L);
    std::vector<std::size_t> best;
    for (std::size_t i = 0; i < n; ++i) {
        if (arrivals[i] < 0) throw std::invalid_argument("negative arrival count");
        if (arrivals[i] == 0) continue;
        best.clear();
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < m; ++j) {
            if (eta(i, j) > top) {
                top = eta(i, j);
                best.clear();
            }
            if (eta(i, j) == top) best.push_back(j);
        }
        std::size_t pick = best.size() == 1 ? best[0] : best[tie_stream.uniform_index(best.size())];
        x(i, pick) = arrivals[i];
    }
    return x;
}

void update_queues(QueueState& queues, const Grid<long>& allocation,
                   const std::vector<Grid<double>>& weights,
                   const std::vector<std::vector<double>>& requirements, double epsilon) {
    const std::size_t n = allocation.rows();
    const std::size_t m = allocation.cols();
    for (std::size_t k = 0; k < weights.size(); ++k)
        for (std::size_t j = 0; j < m; ++j) {
            double inflow = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                inflow += weights[k](i, j) * static_cast<double>(allocation(i, j));
            queues.q(j, k) =
                std::max(queues.q(j, k) + inflow - requirements[k][j] + epsilon, 0.0);
        }
}

TrialRecord run_pond_trial(const Instance& inst, const PondParams& params, long horizon,
                           std::uint64_t trial_seed) {
    if (horizon < 1) throw std::invalid_argument("run_pond_trial: horizon must be >= 1");
    if (params.v <= 0.0) throw std::invalid_argument("run_pond_trial: v must be positive");
    if (params.epsilon < 0.0)
        throw std::invalid_argument("run_pond_trial: epsilon must be non-negative");
    auto report = validate_instance(inst);
    if (!report.ok())
        throw std::invalid_argument("run_pond_trial: invalid instance: " + report.errors.front());

    const std::size_t n = inst.n_types;
    const std::size_t m = inst.n_servers;
    const std::size_t k = inst.n_constraints();

    auto arrivals_rng = derive_stream(trial_seed, {{"arrivals", 0}});
    auto rewards_rng = derive_stream(trial_seed, {{"rewards", 0}});
    auto constraints_rng = derive_stream(trial_seed, {{"constraints", 0}});
    auto ties_rng = derive_stream(trial_seed, {{"ties", 0}});

    TrialRecord rec;
    rec.stats = ArmStats(n, m);
    rec.queues = QueueState(m, k);
    rec.slots.reserve(static_cast<std::size_t>(horizon));

    Grid<double> r_hat(n, m);
    for (long t = 0; t < horizon; ++t) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j)
                r_hat(i, j) = params.learner == LearnerKind::Ucb
                                  ? ucb_index(rec.stats.mean(i, j), rec.stats.pulls(i, j), horizon)
                                  : moss_index(rec.stats.mean(i, j), rec.stats.pulls(i, j),
                                               horizon, m);

        SlotOutcome slot;
        slot.arrivals = sample_arrivals(inst.arrival_models, arrivals_rng);
        // weight realizations observed pre-decision, requirements post-decision
        slot.weights.reserve(k);
        slot.requirements.reserve(k);
        for (std::size_t kk = 0; kk < k; ++kk) {
            auto real =
                sample_constraint_realization(inst.constraints[kk], slot.arrivals, constraints_rng);
            slot.weights.push_back(std::move(real.weights));
            slot.requirements.push_back(std::move(real.requirements));
        }

        Grid<double> eta = compute_weights(r_hat, rec.queues, slot.weights, params.v);
        slot.allocation = max_weight_allocate(eta, slot.arrivals, ties_rng);

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

        update_queues(rec.queues, slot.allocation, slot.weights, slot.requirements,
                      params.epsilon);
        slot.queues_after = rec.queues.q;
        rec.slots.push_back(std::move(slot));
    }
    return rec;
}

}  // namespace pond
