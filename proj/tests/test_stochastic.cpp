#include <doctest.h>

#include <cmath>

#include "pond/stochastic.hpp"
#include "test_support.hpp"

using namespace pond;

TEST_CASE("derive_stream is deterministic and label-sensitive") {
    auto a = derive_stream(42, {{"trial", 0}});
    auto b = derive_stream(42, {{"trial", 0}});
    bool same = true;
    for (int i = 0; i < 1000; ++i)
        if (a.next_u64() != b.next_u64()) same = false;
    CHECK(same);

    auto c = derive_stream(42, {{"trial", 0}});
    auto d = derive_stream(42, {{"trial", 1}});
    bool differ = false;
    for (int i = 0; i < 64 && !differ; ++i) differ = c.next_u64() != d.next_u64();
    CHECK(differ);

    auto e = derive_stream(42, {{"trial", 0}});
    auto f = derive_stream(42, {{"trial", 0}, {"rewards", 3}});
    differ = false;
    for (int i = 0; i < 64 && !differ; ++i) differ = e.next_u64() != f.next_u64();
    CHECK(differ);
}

TEST_CASE("derive_stream rejects empty labels") {
    CHECK_THROWS(derive_seed(42, {}));
}

TEST_CASE("deterministic arrivals") {
    auto rng = derive_stream(1, {{"t", 0}});
    for (int i = 0; i < 10; ++i) {
        auto v = sample_arrivals({DistModel::deterministic(2.0)}, rng);
        CHECK(v[0] == 2);
    }
}

TEST_CASE("geometric arrival mean and zero mass match closed form") {
    auto rng = derive_stream(9, {{"t", 0}});
    const int n = 1000000;
    long sum1 = 0, zeros2 = 0;
    std::vector<DistModel> models = {DistModel::geometric(1.0), DistModel::geometric(2.0)};
    for (int i = 0; i < n; ++i) {
        auto v = sample_arrivals(models, rng);
        sum1 += v[0];
        if (v[1] == 0) ++zeros2;
    }
    CHECK(std::abs(sum1 / double(n) - 1.0) < 0.01);
    // P(X=0) = p = 1/(1+2) for mean 2
    CHECK(std::abs(zeros2 / double(n) - 1.0 / 3.0) < 0.005);
}

TEST_CASE("reward sampling: counts and bounds") {
    auto rng = derive_stream(3, {{"t", 0}});
    CHECK(sample_rewards(DistModel::bernoulli(0.5), 0, rng).empty());
    auto ones = sample_rewards(DistModel::bernoulli(1.0), 5, rng);
    REQUIRE(ones.size() == 5);
    for (double v : ones) CHECK(v == 1.0);

    double sum = 0.0;
    const long n = 1000000;
    auto draws = sample_rewards(DistModel::bernoulli(0.6), n, rng);
    for (double v : draws) sum += v;
    CHECK(std::abs(sum / double(n) - 0.6) < 0.002);
}

TEST_CASE("sampled weights honor the declared sign") {
    auto inst = testing::synthetic_instance();
    auto rng = derive_stream(11, {{"t", 0}});
    for (int rep = 0; rep < 100; ++rep)
        for (const auto& spec : inst.constraints) {
            auto real = sample_constraint_realization(spec, {1, 1}, rng);
            for (std::size_t i = 0; i < real.weights.rows(); ++i)
                for (std::size_t j = 0; j < real.weights.cols(); ++j) {
                    if (spec.sign == WeightSign::AllNonNegative)
                        CHECK(real.weights(i, j) >= 0.0);
                    else
                        CHECK(real.weights(i, j) <= 0.0);
                }
        }
}

TEST_CASE("custom model violating its sign is a hard error") {
    ConstraintSpec spec;
    spec.kind = ConstraintKind::Custom;
    spec.weight_model = Grid<DistModel>(1, 1, DistModel::deterministic(-1.0));
    spec.requirement_model = {DistModel::deterministic(0.0)};
    spec.sign = WeightSign::AllNonNegative;
    auto rng = derive_stream(5, {{"t", 0}});
    CHECK_THROWS(sample_constraint_realization(spec, {1}, rng));
}

TEST_CASE("empirical models draw uniformly from their support") {
    auto rng = derive_stream(13, {{"t", 0}});
    DistModel m = DistModel::empirical({0.2, 0.4});
    double sum = 0.0;
    const int n = 200000;
    for (double v : sample_rewards(m, n, rng)) sum += v;
    CHECK(std::abs(sum / n - 0.3) < 0.002);
}
