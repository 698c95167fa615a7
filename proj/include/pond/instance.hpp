#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pond/grid.hpp"

namespace pond {

enum class Dist {
    Deterministic,
    Bernoulli,
    Geometric,               // arrivals only
    NegatedArrivalFraction,  // requirements only: realizes -d * (total arrivals this slot)
    Empirical,
};

// One scalar distribution. Which fields are meaningful depends on the tag.
struct DistModel {
    Dist tag = Dist::Deterministic;
    double param = 0.0;          // value / mean / d
    std::vector<double> values;  // Empirical support (uniform draw)

    static DistModel deterministic(double v) { return {Dist::Deterministic, v, {}}; }
    static DistModel bernoulli(double mean) { return {Dist::Bernoulli, mean, {}}; }
    static DistModel geometric(double mean) { return {Dist::Geometric, mean, {}}; }
    static DistModel negated_arrival_fraction(double d) {
        return {Dist::NegatedArrivalFraction, d, {}};
    }
    static DistModel empirical(std::vector<double> vals) {
        return {Dist::Empirical, 0.0, std::move(vals)};
    }

    // Mean of the realization. NegatedArrivalFraction depends on the arrival
    // process, so callers pass the mean total arrival rate (ignored otherwise).
    double mean(double total_arrival_mean = 0.0) const;

    // Whether realizations have a finite hard bound, and that bound on |value|.
    bool bounded() const;
    double abs_bound(double c_lambda = 0.0) const;
};

enum class ConstraintKind { Capacity, Fairness, Resource, Custom };
enum class WeightSign { AllNonNegative, AllNonPositive };

std::string to_string(ConstraintKind k);

// One constraint family: N x M weight models, M requirement models.
struct ConstraintSpec {
    ConstraintKind kind = ConstraintKind::Custom;
    Grid<DistModel> weight_model;             // N x M
    std::vector<DistModel> requirement_model; // M
    WeightSign sign = WeightSign::AllNonNegative;
};

// Capacity: unit weights, requirement = per-server service model.
ConstraintSpec build_capacity_constraint(std::size_t n_types,
                                         std::vector<DistModel> service_models);
// Fairness: weight -1 everywhere, requirement = -d_j * total arrivals.
ConstraintSpec build_fairness_constraint(std::size_t n_types, std::size_t n_servers,
                                         const std::vector<double>& d);
// Resource: explicit weight/requirement models, pass-through.
ConstraintSpec build_resource_constraint(Grid<DistModel> weights,
                                         std::vector<DistModel> requirements,
                                         WeightSign sign = WeightSign::AllNonNegative);

struct Instance {
    std::size_t n_types = 0;
    std::size_t n_servers = 0;
    std::vector<DistModel> arrival_models;  // N
    Grid<double> reward_means;              // N x M, true means in [0,1]
    Grid<DistModel> reward_models;          // N x M
    std::vector<ConstraintSpec> constraints;
    double c_lambda = 1.0;
    double c_u = 1.0;

    std::size_t n_constraints() const { return constraints.size(); }
    double total_arrival_mean() const;
};

struct CheckResult {
    enum class Status { Pass, Fail, NotCheckable };
    std::string name;
    Status status;
    std::string note;
};

struct ValidationReport {
    std::vector<std::string> errors;       // structural hard failures
    std::vector<CheckResult> checks;       // assumption-level flags
    bool ok() const { return errors.empty(); }
    bool has_failed_check() const;
};

ValidationReport validate_instance(const Instance& inst);

}  // namespace pond
