#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pond/harness.hpp"
#include "test_support.hpp"

using namespace pond;
namespace fs = std::filesystem;

namespace {

std::string small_config_json() {
    return R"({
      "master_seed": 7,
      "trials": 3,
      "horizons": [50, 100],
      "algorithms": ["pond", "etc"],
      "epsilon_modes": [{"mode": "zero"}, {"mode": "over_sqrt_t", "c": 1.0}],
      "v_mode": {"mode": "two_sqrt_t"},
      "learner": "ucb",
      "instance": {
        "arrivals": [{"dist": "deterministic", "value": 1.0}],
        "reward_means": [[0.9, 0.1]],
        "constraints": [{"kind": "capacity",
                         "mu": [{"dist": "deterministic", "value": 0.5},
                                {"dist": "deterministic", "value": 1.0}]}],
        "c_lambda": 1.0,
        "c_u": 1.0
      },
      "output_dir": "out"
    })";
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    fs::path path;
    TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("pond_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing") {
    auto cfg = parse_config_json(small_config_json());
    CHECK(cfg.master_seed == 7);
    CHECK(cfg.trials == 3);
    CHECK(cfg.horizons == std::vector<long>{50, 100});
    REQUIRE(cfg.algorithms.size() == 2);
    CHECK(cfg.algorithms[0] == Algorithm::Pond);
    CHECK(cfg.algorithms[1] == Algorithm::Etc);
    REQUIRE(cfg.epsilon_modes.size() == 2);
    CHECK(cfg.epsilon_modes[0].kind == EpsilonMode::Kind::Zero);
    CHECK(cfg.epsilon_modes[1].kind == EpsilonMode::Kind::OverSqrtT);
    CHECK(cfg.epsilon_modes[1].value == 1.0);
    CHECK(cfg.v_mode.kind == VMode::Kind::TwoSqrtT);
    CHECK(cfg.learner == LearnerKind::Ucb);
    CHECK(cfg.instance.n_types == 1);
    CHECK(cfg.instance.n_servers == 2);
    CHECK(cfg.instance.constraints.size() == 1);
    CHECK(!cfg.replay.has_value());
}

TEST_CASE("config rejects unknown keys and bad values") {
    SUBCASE("unknown top-level key") {
        std::string text = small_config_json();
        text.insert(text.find("\"master_seed\""), "\"bogus\": 1,\n      ");
        CHECK_THROWS_WITH_AS(parse_config_json(text), doctest::Contains("unknown key"),
                             std::runtime_error);
    }
    SUBCASE("unknown nested key inside instance") {
        std::string text = small_config_json();
        text.insert(text.find("\"arrivals\""), "\"mystery\": 2,\n        ");
        CHECK_THROWS_AS(parse_config_json(text), std::runtime_error);
    }
    SUBCASE("trials must be positive") {
        std::string text = small_config_json();
        auto pos = text.find("\"trials\": 3");
        text.replace(pos, 11, "\"trials\": 0");
        CHECK_THROWS_AS(parse_config_json(text), std::runtime_error);
    }
    SUBCASE("reward mean out of range is a hard error") {
        std::string text = small_config_json();
        auto pos = text.find("[[0.9, 0.1]]");
        text.replace(pos, 12, "[[1.9, 0.1]]");
        CHECK_THROWS_AS(parse_config_json(text), std::runtime_error);
    }
}

TEST_CASE("parameter mode resolution") {
    auto inst = testing::synthetic_instance();
    EpsilonMode zero{EpsilonMode::Kind::Zero, 0.0};
    CHECK(zero.resolve(10000, inst) == 0.0);
    EpsilonMode over{EpsilonMode::Kind::OverSqrtT, 1.0};
    CHECK(over.resolve(10000, inst) == doctest::Approx(0.01).epsilon(1e-12));
    EpsilonMode half{EpsilonMode::Kind::OverSqrtT, 0.5};
    CHECK(half.resolve(10000, inst) == doctest::Approx(0.005).epsilon(1e-12));
    EpsilonMode fixed{EpsilonMode::Kind::Fixed, 0.03};
    CHECK(fixed.resolve(123, inst) == 0.03);

    VMode v{VMode::Kind::TwoSqrtT, 0.0};
    CHECK(v.resolve(10000, inst) == doctest::Approx(200.0));
    VMode vf{VMode::Kind::Fixed, 17.0};
    CHECK(vf.resolve(10000, inst) == 17.0);
}

TEST_CASE("constraint family csv names are distinct") {
    auto inst = testing::synthetic_instance();
    auto names = constraint_family_names(inst);
    REQUIRE(names.size() == 3);
    CHECK(names[0] == "capacity");
    CHECK(names[1] == "fairness");
    CHECK(names[2] == "resource");

    Instance two = inst;
    two.constraints.push_back(two.constraints[0]);
    auto dup = constraint_family_names(two);
    REQUIRE(dup.size() == 4);
    CHECK(dup[0] != dup[3]);
}

TEST_CASE("sweep output is byte-identical across runs") {
    auto cfg = parse_config_json(small_config_json());
    TempDir a("sweep_a"), b("sweep_b");
    auto ra = run_sweep(cfg, a.path.string(), 2);
    auto rb = run_sweep(cfg, b.path.string(), 1);
    // pond runs once per epsilon mode, etc once per horizon: (2 + 1) x 2
    REQUIRE(ra.size() == 6);
    CHECK(read_file(a.path / "aggregate.csv") == read_file(b.path / "aggregate.csv"));
    CHECK(read_file(a.path / "lp.json") == read_file(b.path / "lp.json"));
    for (const auto& cell : ra) CHECK(!cell.failed);
}

TEST_CASE("cells with different identities use different seeds") {
    auto cfg = parse_config_json(small_config_json());
    auto a = run_cell(cfg, Algorithm::Pond, cfg.epsilon_modes[0], 100, 1);
    auto b = run_cell(cfg, Algorithm::Pond, cfg.epsilon_modes[1], 100, 1);
    CHECK(a.trial_regrets != b.trial_regrets);
    auto a2 = run_cell(cfg, Algorithm::Pond, cfg.epsilon_modes[0], 100, 2);
    CHECK(a.trial_regrets == a2.trial_regrets);
}

TEST_CASE("logged dataset csv round trip") {
    TempDir dir("dataset");
    auto path = dir.path / "log.csv";
    {
        std::ofstream out(path);
        out << "context_type,logged_arm,reward\n";
        out << "0,1,0.5\n0,0,1.0\n1,2,0.0\n";
    }
    auto ds = load_dataset_csv(path.string());
    REQUIRE(ds.records.size() == 3);
    CHECK(ds.n_types == 2);
    CHECK(ds.n_arms == 3);
    CHECK(ds.records[0].logged_arm == 1);
    CHECK(ds.mean_reward() == doctest::Approx(0.5));

    std::ofstream bad(path);
    bad << "context_type,logged_arm,reward\n0,0,1.5\n";
    bad.close();
    CHECK_THROWS(load_dataset_csv(path.string()));
}

TEST_CASE("reject-sampling replay sanity") {
    // one context, two arms; arm 0 always pays 1, arm 1 always pays 0
    LoggedDataset ds;
    ds.n_types = 1;
    ds.n_arms = 2;
    RandomStream logger(derive_seed(991, {{"logger", 0}}));
    for (int i = 0; i < 4000; ++i) {
        LoggedRecord rec;
        rec.context_type = 0;
        rec.logged_arm = logger.uniform_index(2);
        rec.reward = rec.logged_arm == 0 ? 1.0 : 0.0;
        ds.records.push_back(rec);
    }
    std::vector<ConstraintSpec> constraints = {
        build_capacity_constraint(1, {DistModel::deterministic(5.0), DistModel::deterministic(5.0)})};

    PondParams params{20.0, 0.0, LearnerKind::Ucb};
    auto uni = replay_logged(ds, constraints, ReplayPolicy::UniformRandom, params, 800, 5);
    CHECK(uni.accepted == 800);
    CHECK(std::abs(uni.acceptance_rate - 0.5) < 0.05);
    CHECK(std::abs(uni.avg_accepted_reward - 0.5) < 0.06);

    auto pond = replay_logged(ds, constraints, ReplayPolicy::Pond, params, 800, 5);
    CHECK(pond.accepted == 800);
    // slack constraints: the learner should concentrate on the paying arm
    CHECK(pond.avg_accepted_reward > 0.9);
}
