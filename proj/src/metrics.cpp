#include "pond/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace pond {

TrialMetrics compute_metrics(const TrialRecord& trial, const Grid<double>& true_r,
                             double lp_opt_per_slot) {
    const std::size_t t_max = trial.slots.size();
    if (t_max == 0) throw std::invalid_argument("compute_metrics: empty trial");
    const std::size_t n = trial.slots[0].allocation.rows();
    const std::size_t m = trial.slots[0].allocation.cols();
    const std::size_t k = trial.slots[0].weights.size();
    if (true_r.rows() != n || true_r.cols() != m)
        throw std::invalid_argument("compute_metrics: reward shape mismatch");

    TrialMetrics out;
    out.expected_reward.reserve(t_max);
    out.regret.reserve(t_max);
    out.violation_signed.reserve(t_max);

    double reward_acc = 0.0;
    Grid<double> viol(m, k, 0.0);
    for (std::size_t t = 0; t < t_max; ++t) {
        const auto& slot = trial.slots[t];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                long x = slot.allocation(i, j);
                if (x == 0) continue;
                reward_acc += true_r(i, j) * static_cast<double>(x);
                out.realized_reward_total += slot.reward_sum(i, j);
            }
        for (std::size_t kk = 0; kk < k; ++kk)
            for (std::size_t j = 0; j < m; ++j) {
                double inflow = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    inflow += slot.weights[kk](i, j) * static_cast<double>(slot.allocation(i, j));
                viol(j, kk) += inflow - slot.requirements[kk][j];
            }
        out.expected_reward.push_back(reward_acc);
        out.regret.push_back(static_cast<double>(t + 1) * lp_opt_per_slot - reward_acc);
        out.violation_signed.push_back(viol);
    }

    out.violation_positive_part = Grid<double>(m, k, 0.0);
    for (std::size_t kk = 0; kk < k; ++kk)
        for (std::size_t j = 0; j < m; ++j)
            out.violation_positive_part(j, kk) = std::max(viol(j, kk), 0.0);
    return out;
}

AggregateSummary aggregate(const std::vector<TrialMetrics>& trials,
                           const std::vector<std::string>& family_names) {
    if (trials.empty()) throw std::invalid_argument("aggregate: no trials");
    const std::size_t n_trials = trials.size();
    const auto& first = trials.front().violation_signed.back();
    const std::size_t m = first.rows();
    const std::size_t k = first.cols();
    if (family_names.size() != k)
        throw std::invalid_argument("aggregate: family name per constraint required");

    AggregateSummary out;
    out.n_trials = n_trials;

    double sum = 0.0, sumsq = 0.0;
    for (const auto& t : trials) {
        double r = t.regret.back();
        sum += r;
        sumsq += r * r;
    }
    out.regret_mean = sum / static_cast<double>(n_trials);
    if (n_trials > 1) {
        double var = (sumsq - sum * sum / static_cast<double>(n_trials)) /
                     static_cast<double>(n_trials - 1);
        out.regret_sem = std::sqrt(std::max(var, 0.0) / static_cast<double>(n_trials));
    }

    for (std::size_t kk = 0; kk < k; ++kk) {
        FamilySummary fam;
        fam.family = family_names[kk];
        double max_signed = -std::numeric_limits<double>::infinity();
        double pospart = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            double mean_signed = 0.0;
            for (const auto& t : trials) mean_signed += t.violation_signed.back()(j, kk);
            mean_signed /= static_cast<double>(n_trials);
            max_signed = std::max(max_signed, mean_signed);
            pospart += std::max(mean_signed, 0.0);
        }
        fam.violation_max_signed = max_signed;
        fam.violation_pospart = pospart;
        out.families.push_back(fam);
    }
    return out;
}

ScalingFit fit_scaling(const std::vector<std::pair<long, double>>& points) {
    std::set<long> distinct;
    for (const auto& [t, _] : points) distinct.insert(t);
    if (distinct.size() < 3)
        throw std::invalid_argument("fit_scaling: need at least 3 distinct horizons");

    const double n = static_cast<double>(points.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [t, y] : points) {
        double x = std::sqrt(static_cast<double>(t));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    double sxx_c = sxx - sx * sx / n;
    double sxy_c = sxy - sx * sy / n;
    double syy_c = syy - sy * sy / n;

    ScalingFit fit;
    fit.slope = sxy_c / sxx_c;
    fit.intercept = (sy - fit.slope * sx) / n;
    if (syy_c <= 0.0) {
        fit.constant_fit = true;
        fit.slope = 0.0;
        fit.r_squared = 0.0;
    } else {
        fit.r_squared = sxy_c * sxy_c / (sxx_c * syy_c);
    }
    return fit;
}

}  // namespace pond
