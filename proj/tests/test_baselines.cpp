#include <doctest.h>

#include <cmath>

#include "pond/baselines.hpp"
#include "pond/fluid_lp.hpp"
#include "test_support.hpp"

using namespace pond;

TEST_CASE("exploration length formula") {
    CHECK(etc_exploration_slots(2, 4, 10000) == 74);  // ceil(8 * ln 10000)
    CHECK(etc_exploration_slots(1, 1, 10000) == 10);
}

TEST_CASE("deterministic instance commits to the exact LP routing") {
    // deterministic rewards and arrivals make the phase-1 estimates exact
    Instance inst;
    inst.n_types = 1;
    inst.n_servers = 2;
    inst.arrival_models = {DistModel::deterministic(1.0)};
    inst.reward_means = Grid<double>::from_rows({{0.9, 0.1}});
    inst.reward_models = Grid<DistModel>(1, 2);
    inst.reward_models(0, 0) = DistModel::deterministic(0.9);
    inst.reward_models(0, 1) = DistModel::deterministic(0.1);
    inst.constraints.push_back(build_capacity_constraint(
        1, {DistModel::deterministic(0.5), DistModel::deterministic(1.0)}));
    inst.c_lambda = 1.0;
    inst.c_u = 1.0;

    const long horizon = 4000;
    auto rec = run_etc_trial(inst, horizon, 12345);
    CHECK(!rec.lp_fallback);
    CHECK(rec.uniform_types.empty());

    // unique LP optimum is x = (0.5, 0.5): phase-2 routing should be 50/50
    long explore = rec.explore_slots;
    long to_first = 0, committed = 0;
    for (long t = explore; t < horizon; ++t) {
        to_first += rec.slots[t].allocation(0, 0);
        ++committed;
    }
    CHECK(std::abs(to_first / double(committed) - 0.5) < 0.03);
}

TEST_CASE("conservation and determinism hold for ETC trials") {
    auto inst = testing::synthetic_instance();
    auto a = run_etc_trial(inst, 300, 42);
    auto b = run_etc_trial(inst, 300, 42);
    REQUIRE(a.slots.size() == 300);
    for (std::size_t t = 0; t < a.slots.size(); ++t) {
        for (std::size_t i = 0; i < 2; ++i) {
            long sum = 0;
            for (std::size_t j = 0; j < 4; ++j) sum += a.slots[t].allocation(i, j);
            CHECK(sum == a.slots[t].arrivals[i]);
        }
        CHECK(a.slots[t].allocation == b.slots[t].allocation);
    }
}

TEST_CASE("ETC and POND observe the same samples for the same seed") {
    auto inst = testing::synthetic_instance();
    auto pond_rec = run_pond_trial(inst, {1.0, 0.0, LearnerKind::Ucb}, 50, 4242);
    auto etc_rec = run_etc_trial(inst, 50, 4242);
    for (std::size_t t = 0; t < 50; ++t) {
        CHECK(pond_rec.slots[t].arrivals == etc_rec.slots[t].arrivals);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(pond_rec.slots[t].weights[k] == etc_rec.slots[t].weights[k]);
            CHECK(pond_rec.slots[t].requirements[k] == etc_rec.slots[t].requirements[k]);
        }
    }
}
