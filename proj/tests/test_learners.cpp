#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "pond/learners.hpp"

using namespace pond;

TEST_CASE("ucb index values") {
    CHECK(std::isinf(ucb_index(0.3, 0, 10000)));
    CHECK(ucb_index(0.5, 100, 10000) ==
          doctest::Approx(0.5 + std::sqrt(std::log(10000.0) / 100.0)).epsilon(1e-12));
    CHECK(ucb_index(0.5, 100, 10000) == doctest::Approx(0.803485).epsilon(1e-6));

    // bonus vanishes as pulls grow with the horizon
    double prev = std::numeric_limits<double>::infinity();
    for (long t : {100L, 10000L, 1000000L}) {
        double v = ucb_index(0.0, t, t);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 0.01);
}

TEST_CASE("moss index values and clipping") {
    CHECK(std::isinf(moss_index(0.3, 0, 10000, 4)));
    CHECK(moss_index(0.5, 100, 10000, 4) ==
          doctest::Approx(0.5 + std::sqrt(0.02 * std::log(25.0))).epsilon(1e-12));
    CHECK(moss_index(0.5, 100, 10000, 4) == doctest::Approx(0.753727).epsilon(1e-6));
    // T/(M*N) = 0.5 < 1: clipped bonus, index equals the empirical mean exactly
    CHECK(moss_index(0.5, 5000, 10000, 4) == 0.5);
}

TEST_CASE("indices never fall below the empirical mean; ucb bonus shrinks") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        double mean = uni(rng);
        long pulls = 1 + static_cast<long>(uni(rng) * 5000);
        long horizon = 2 + static_cast<long>(uni(rng) * 100000);
        CHECK(ucb_index(mean, pulls, horizon) >= mean);
        CHECK(moss_index(mean, pulls, horizon, 4) >= mean);
        CHECK(ucb_index(mean, pulls + 1, horizon) < ucb_index(mean, pulls, horizon));
    }
}

TEST_CASE("update_stats arithmetic") {
    ArmStats s(1, 1);
    update_stats(s, 0, 0, 3, 2.0);
    CHECK(s.pulls(0, 0) == 3);
    CHECK(s.mean(0, 0) == doctest::Approx(2.0 / 3.0));

    update_stats(s, 0, 0, 0, 0.0);
    CHECK(s.pulls(0, 0) == 3);
    CHECK(s.mean(0, 0) == doctest::Approx(2.0 / 3.0));

    ArmStats t(1, 1);
    update_stats(t, 0, 0, 10, 5.0);
    update_stats(t, 0, 0, 10, 7.0);
    CHECK(t.pulls(0, 0) == 20);
    CHECK(t.mean(0, 0) == doctest::Approx(0.6));
}

TEST_CASE("update_stats rejects reward sums out of range") {
    ArmStats s(1, 1);
    CHECK_THROWS(update_stats(s, 0, 0, 2, 2.5));
    CHECK_THROWS(update_stats(s, 0, 0, 2, -0.1));
}

TEST_CASE("batched and one-at-a-time updates agree") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        ArmStats batched(1, 1), single(1, 1);
        double total = 0.0;
        long pulls = 0;
        for (int step = 0; step < 100; ++step) {
            long count = static_cast<long>(uni(rng) * 5);
            double sum = 0.0;
            std::vector<double> draws;
            for (long c = 0; c < count; ++c) {
                double v = uni(rng);
                draws.push_back(v);
                sum += v;
            }
            update_stats(batched, 0, 0, count, sum);
            for (double v : draws) update_stats(single, 0, 0, 1, v);
            total += sum;
            pulls += count;
        }
        CHECK(batched.pulls(0, 0) == single.pulls(0, 0));
        if (pulls > 0) {
            double truth = total / double(pulls);
            CHECK(std::abs(batched.mean(0, 0) - truth) <= 1e-6 * std::max(1.0, std::abs(truth)));
            CHECK(std::abs(batched.mean(0, 0) - single.mean(0, 0)) <= 1e-6);
        }
    }
}
