#include "pond/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace pond {

double DistModel::mean(double total_arrival_mean) const {
    switch (tag) {
        case Dist::Deterministic: return param;
        case Dist::Bernoulli: return param;
        case Dist::Geometric: return param;
        case Dist::NegatedArrivalFraction: return -param * total_arrival_mean;
        case Dist::Empirical: {
            if (values.empty()) return 0.0;
            return std::accumulate(values.begin(), values.end(), 0.0) /
                   static_cast<double>(values.size());
        }
    }
    return 0.0;
}

bool DistModel::bounded() const {
    // NegatedArrivalFraction is bounded only if arrivals are; callers resolve
    // that at the instance level. Standalone it is treated as unbounded.
    return tag != Dist::Geometric && tag != Dist::NegatedArrivalFraction;
}

double DistModel::abs_bound(double c_lambda) const {
    switch (tag) {
        case Dist::Deterministic: return std::abs(param);
        case Dist::Bernoulli: return 1.0;
        case Dist::Geometric: return std::numeric_limits<double>::infinity();
        case Dist::NegatedArrivalFraction:
            // bound assumes per-type arrivals capped by c_lambda; caller scales
            // by N if it wants the total-arrival bound
            return param * c_lambda;
        case Dist::Empirical: {
            double b = 0.0;
            for (double v : values) b = std::max(b, std::abs(v));
            return b;
        }
    }
    return 0.0;
}

std::string to_string(ConstraintKind k) {
    switch (k) {
        case ConstraintKind::Capacity: return "capacity";
        case ConstraintKind::Fairness: return "fairness";
        case ConstraintKind::Resource: return "resource";
        case ConstraintKind::Custom: return "custom";
    }
    return "?";
}

ConstraintSpec build_capacity_constraint(std::size_t n_types,
                                         std::vector<DistModel> service_models) {
    if (service_models.empty())
        throw std::invalid_argument("capacity constraint: missing service models");
    ConstraintSpec spec;
    spec.kind = ConstraintKind::Capacity;
    spec.weight_model = Grid<DistModel>(n_types, service_models.size(),
                                        DistModel::deterministic(1.0));
    spec.requirement_model = std::move(service_models);
    spec.sign = WeightSign::AllNonNegative;
    return spec;
}

ConstraintSpec build_fairness_constraint(std::size_t n_types, std::size_t n_servers,
                                         const std::vector<double>& d) {
    if (d.size() != n_servers)
        throw std::invalid_argument("fairness constraint: need one d_j per server");
    ConstraintSpec spec;
    spec.kind = ConstraintKind::Fairness;
    spec.weight_model = Grid<DistModel>(n_types, n_servers,
                                        DistModel::deterministic(-1.0));
    spec.requirement_model.reserve(n_servers);
    for (double dj : d) {
        if (dj < 0.0 || dj > 1.0)
            throw std::invalid_argument("fairness constraint: d_j must be in [0,1]");
        spec.requirement_model.push_back(DistModel::negated_arrival_fraction(dj));
    }
    spec.sign = WeightSign::AllNonPositive;
    return spec;
}

ConstraintSpec build_resource_constraint(Grid<DistModel> weights,
                                         std::vector<DistModel> requirements,
                                         WeightSign sign) {
    if (weights.cols() != requirements.size())
        throw std::invalid_argument("resource constraint: weight/requirement shape mismatch");
    ConstraintSpec spec;
    spec.kind = ConstraintKind::Resource;
    spec.weight_model = std::move(weights);
    spec.requirement_model = std::move(requirements);
    spec.sign = sign;
    return spec;
}

double Instance::total_arrival_mean() const {
    double s = 0.0;
    for (const auto& m : arrival_models) s += m.mean();
    return s;
}

bool ValidationReport::has_failed_check() const {
    return std::any_of(checks.begin(), checks.end(), [](const CheckResult& c) {
        return c.status == CheckResult::Status::Fail;
    });
}

namespace {

std::string cell(std::size_t i, std::size_t j) {
    std::ostringstream os;
    os << "(" << i << "," << j << ")";
    return os.str();
}

bool sign_ok(WeightSign sign, double v) {
    return sign == WeightSign::AllNonNegative ? v >= 0.0 : v <= 0.0;
}

// Extreme realizations of a bounded weight model, for static sign checking.
std::pair<double, double> value_range(const DistModel& m) {
    switch (m.tag) {
        case Dist::Deterministic: return {m.param, m.param};
        case Dist::Bernoulli: return {0.0, 1.0};
        case Dist::Empirical: {
            if (m.values.empty()) return {0.0, 0.0};
            auto [lo, hi] = std::minmax_element(m.values.begin(), m.values.end());
            return {*lo, *hi};
        }
        default: return {-std::numeric_limits<double>::infinity(),
                         std::numeric_limits<double>::infinity()};
    }
}

}  // namespace

ValidationReport validate_instance(const Instance& inst) {
    ValidationReport rep;
    auto err = [&rep](const std::string& msg) { rep.errors.push_back(msg); };

    if (inst.n_types < 1) err("n_types must be >= 1");
    if (inst.n_servers < 1) err("n_servers must be >= 1");
    if (inst.c_lambda <= 0.0) err("c_lambda must be positive");
    if (inst.c_u <= 0.0) err("c_u must be positive");

    if (inst.arrival_models.size() != inst.n_types)
        err("need exactly one arrival model per job type");
    if (inst.reward_means.rows() != inst.n_types || inst.reward_means.cols() != inst.n_servers)
        err("reward_means must be N x M");
    if (inst.reward_models.rows() != inst.n_types || inst.reward_models.cols() != inst.n_servers)
        err("reward_models must be N x M");
    if (!rep.ok()) return rep;

    for (std::size_t i = 0; i < inst.n_types; ++i) {
        const auto& m = inst.arrival_models[i];
        switch (m.tag) {
            case Dist::Deterministic:
                if (m.param < 0.0 || m.param != std::floor(m.param))
                    err("arrival model " + std::to_string(i) +
                        ": deterministic arrivals must be a non-negative integer");
                break;
            case Dist::Bernoulli:
                if (m.param < 0.0 || m.param > 1.0)
                    err("arrival model " + std::to_string(i) + ": Bernoulli mean out of [0,1]");
                break;
            case Dist::Geometric:
                if (m.param <= 0.0)
                    err("arrival model " + std::to_string(i) + ": geometric mean must be > 0");
                break;
            case Dist::Empirical:
                for (double v : m.values)
                    if (v < 0.0 || v != std::floor(v))
                        err("arrival model " + std::to_string(i) +
                            ": empirical arrival values must be non-negative integers");
                break;
            default:
                err("arrival model " + std::to_string(i) + ": unsupported distribution tag");
        }
        if (rep.ok() && m.mean() <= 0.0)
            err("arrival model " + std::to_string(i) + ": mean must be positive");
    }

    for (std::size_t i = 0; i < inst.n_types; ++i) {
        for (std::size_t j = 0; j < inst.n_servers; ++j) {
            double r = inst.reward_means(i, j);
            if (r < 0.0 || r > 1.0)
                err("reward mean out of [0,1] at " + cell(i, j) + ": " + std::to_string(r));
            const auto& m = inst.reward_models(i, j);
            if (m.tag == Dist::Geometric || m.tag == Dist::NegatedArrivalFraction)
                err("reward model at " + cell(i, j) + ": unsupported distribution tag");
        }
    }

    for (std::size_t k = 0; k < inst.constraints.size(); ++k) {
        const auto& c = inst.constraints[k];
        if (c.weight_model.rows() != inst.n_types || c.weight_model.cols() != inst.n_servers)
            err("constraint " + std::to_string(k) + ": weight model must be N x M");
        if (c.requirement_model.size() != inst.n_servers)
            err("constraint " + std::to_string(k) + ": need one requirement model per server");
        if (!rep.ok()) continue;
        for (std::size_t i = 0; i < inst.n_types; ++i)
            for (std::size_t j = 0; j < inst.n_servers; ++j) {
                const auto& m = c.weight_model(i, j);
                if (m.tag == Dist::Geometric || m.tag == Dist::NegatedArrivalFraction) {
                    err("constraint " + std::to_string(k) + " weight " + cell(i, j) +
                        ": unsupported distribution tag");
                    continue;
                }
                auto [lo, hi] = value_range(m);
                if (!sign_ok(c.sign, lo) || !sign_ok(c.sign, hi))
                    err("constraint " + std::to_string(k) + " weight " + cell(i, j) +
                        ": realization can violate declared sign");
            }
        for (std::size_t j = 0; j < inst.n_servers; ++j)
            if (c.requirement_model[j].tag == Dist::Geometric)
                err("constraint " + std::to_string(k) + " requirement " + std::to_string(j) +
                    ": unsupported distribution tag");
    }
    if (!rep.ok()) return rep;

    // Assumption-level flags (never silently passed when uncheckable).
    {
        CheckResult c{"assumption-1 rewards in [0,1]", CheckResult::Status::Pass, ""};
        for (std::size_t i = 0; i < inst.n_types && c.status == CheckResult::Status::Pass; ++i)
            for (std::size_t j = 0; j < inst.n_servers; ++j) {
                auto [lo, hi] = value_range(inst.reward_models(i, j));
                if (lo < 0.0 || hi > 1.0) {
                    c.status = CheckResult::Status::Fail;
                    c.note = "reward realization outside [0,1] at " + cell(i, j);
                    break;
                }
            }
        rep.checks.push_back(c);
    }
    {
        CheckResult c{"assumption-2 arrivals bounded by c_lambda", CheckResult::Status::Pass, ""};
        for (std::size_t i = 0; i < inst.n_types; ++i) {
            const auto& m = inst.arrival_models[i];
            if (!m.bounded()) {
                c.status = CheckResult::Status::NotCheckable;
                c.note = "arrival model " + std::to_string(i) +
                         " has unbounded support (geometric); hard bound cannot hold";
                break;
            }
            if (m.abs_bound() > inst.c_lambda) {
                c.status = CheckResult::Status::Fail;
                c.note = "arrival model " + std::to_string(i) + " can exceed c_lambda";
                break;
            }
            if (m.mean() > inst.c_lambda) {
                c.status = CheckResult::Status::Fail;
                c.note = "arrival mean " + std::to_string(i) + " exceeds c_lambda";
                break;
            }
        }
        rep.checks.push_back(c);
    }
    {
        CheckResult c{"assumption-3 weights/requirements bounded by c_u",
                      CheckResult::Status::Pass, ""};
        bool arrivals_bounded = std::all_of(
            inst.arrival_models.begin(), inst.arrival_models.end(),
            [](const DistModel& m) { return m.bounded(); });
        for (std::size_t k = 0; k < inst.constraints.size(); ++k) {
            const auto& spec = inst.constraints[k];
            for (std::size_t i = 0; i < inst.n_types; ++i)
                for (std::size_t j = 0; j < inst.n_servers; ++j)
                    if (spec.weight_model(i, j).abs_bound(inst.c_lambda) > inst.c_u) {
                        c.status = CheckResult::Status::Fail;
                        c.note = "constraint " + std::to_string(k) + " weight " + cell(i, j) +
                                 " exceeds c_u";
                    }
            for (std::size_t j = 0; j < inst.n_servers; ++j) {
                const auto& m = spec.requirement_model[j];
                if (m.tag == Dist::NegatedArrivalFraction && !arrivals_bounded) {
                    if (c.status == CheckResult::Status::Pass) {
                        c.status = CheckResult::Status::NotCheckable;
                        c.note = "constraint " + std::to_string(k) +
                                 ": arrival-dependent requirement with unbounded arrivals";
                    }
                    continue;
                }
                double b = m.tag == Dist::NegatedArrivalFraction
                               ? m.param * inst.c_lambda * static_cast<double>(inst.n_types)
                               : m.abs_bound(inst.c_lambda);
                if (b > inst.c_u && c.status != CheckResult::Status::NotCheckable) {
                    c.status = CheckResult::Status::Fail;
                    c.note = "constraint " + std::to_string(k) + " requirement " +
                             std::to_string(j) + " exceeds c_u";
                }
            }
        }
        rep.checks.push_back(c);
    }
    return rep;
}

}  // namespace pond
