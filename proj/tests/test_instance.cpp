#include <doctest.h>

#include "pond/instance.hpp"
#include "pond/stochastic.hpp"
#include "test_support.hpp"

using namespace pond;

TEST_CASE("synthetic instance validates with unbounded arrivals flagged") {
    auto inst = testing::synthetic_instance();
    auto rep = validate_instance(inst);
    REQUIRE(rep.ok());
    bool saw_a2 = false;
    for (const auto& c : rep.checks) {
        if (c.name.find("assumption-2") != std::string::npos) {
            saw_a2 = true;
            CHECK(c.status == CheckResult::Status::NotCheckable);
            CHECK(!c.note.empty());
        }
    }
    CHECK(saw_a2);
}

TEST_CASE("out-of-range reward mean is a hard failure naming the cell") {
    auto inst = testing::synthetic_instance();
    inst.reward_means(0, 0) = 1.2;
    auto rep = validate_instance(inst);
    REQUIRE(!rep.ok());
    CHECK(rep.errors.front().find("(0,0)") != std::string::npos);
}

TEST_CASE("constant-bounded capacity instance passes assumption 3") {
    Instance inst;
    inst.n_types = 1;
    inst.n_servers = 1;
    inst.arrival_models = {DistModel::deterministic(1.0)};
    inst.reward_means = Grid<double>(1, 1, 0.5);
    inst.reward_models = Grid<DistModel>(1, 1, DistModel::bernoulli(0.5));
    inst.constraints.push_back(build_capacity_constraint(1, {DistModel::deterministic(0.85)}));
    inst.c_lambda = 1.0;
    inst.c_u = 1.0;
    auto rep = validate_instance(inst);
    REQUIRE(rep.ok());
    for (const auto& c : rep.checks)
        if (c.name.find("assumption-3") != std::string::npos)
            CHECK(c.status == CheckResult::Status::Pass);
}

TEST_CASE("validate_instance is pure") {
    auto inst = testing::synthetic_instance();
    auto a = validate_instance(inst);
    auto b = validate_instance(inst);
    REQUIRE(a.checks.size() == b.checks.size());
    for (std::size_t i = 0; i < a.checks.size(); ++i) {
        CHECK(a.checks[i].status == b.checks[i].status);
        CHECK(a.checks[i].note == b.checks[i].note);
    }
}

TEST_CASE("capacity builder: unit weights, service requirements") {
    auto spec = build_capacity_constraint(
        2, {DistModel::deterministic(0.85), DistModel::deterministic(0.85),
            DistModel::deterministic(0.8), DistModel::deterministic(0.8)});
    CHECK(spec.sign == WeightSign::AllNonNegative);
    auto rng = derive_stream(7, {{"t", 0}});
    auto real = sample_constraint_realization(spec, {1, 2}, rng);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(real.weights(i, j) == 1.0);
    CHECK(real.requirements[0] == doctest::Approx(0.85));
    CHECK(real.requirements[2] == doctest::Approx(0.8));
}

TEST_CASE("fairness builder: -1 weights, arrival-tied requirement") {
    auto spec = build_fairness_constraint(2, 4, {0.25, 0.25, 0.20, 0.20});
    CHECK(spec.sign == WeightSign::AllNonPositive);
    auto rng = derive_stream(7, {{"t", 0}});
    auto real = sample_constraint_realization(spec, {1, 2}, rng);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(real.weights(i, j) == -1.0);
    CHECK(real.requirements[0] == doctest::Approx(-0.75));  // -0.25 * 3
    CHECK(real.requirements[3] == doctest::Approx(-0.60));
}

TEST_CASE("fairness builder rejects d outside [0,1]") {
    CHECK_THROWS(build_fairness_constraint(2, 2, {0.5, 1.5}));
}

TEST_CASE("resource builder passes models through") {
    Grid<DistModel> w(2, 4);
    std::vector<std::vector<double>> wv = {{2, 2, 2, 2}, {4, 4, 4, 3.5}};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 4; ++j) w(i, j) = DistModel::deterministic(wv[i][j]);
    auto spec = build_resource_constraint(
        std::move(w), {DistModel::deterministic(3), DistModel::deterministic(3),
                       DistModel::deterministic(2.5), DistModel::deterministic(2.5)});
    CHECK(spec.kind == ConstraintKind::Resource);
    CHECK(spec.sign == WeightSign::AllNonNegative);
    CHECK(spec.weight_model(1, 3).param == doctest::Approx(3.5));
    CHECK(spec.requirement_model[2].param == doctest::Approx(2.5));
}
