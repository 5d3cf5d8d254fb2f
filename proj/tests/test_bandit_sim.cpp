#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "levybandit/bandit_sim.hpp"

using namespace levybandit;

namespace {
const LevyModel kBm = LevyModel::brownian(0.0, std::sqrt(2.0));
const Reward kIdentity = Reward::affine(0.0, 1.0);

EpisodeConfig two_identical_arms() {
    EpisodeConfig config;
    config.arms = {{kBm, kIdentity, 0.0}, {kBm, kIdentity, 0.0}};
    config.q = 1.0;
    config.lambda = 3.0;
    config.seed = 99;
    return config;
}
}  // namespace

TEST_CASE("select_arm tie-break and ordering") {
    std::vector<GittinsEvaluator> evals;
    evals.emplace_back(kBm, kIdentity, 1.0, 3.0, Problem::P1);
    evals.emplace_back(kBm, kIdentity, 1.0, 3.0, Problem::P1);

    const std::vector<double> equal_states = {0.0, 0.0};
    CHECK(select_arm(Policy::GittinsIndex, equal_states, evals) == 0);

    const std::vector<double> states = {0.0, 1.0};
    CHECK(select_arm(Policy::GittinsIndex, states, evals) == 1);
    CHECK(select_arm(Policy::Greedy, states, evals) == 1);

    CHECK(select_arm(Policy::RoundRobin, states, evals, 0) == 0);
    CHECK(select_arm(Policy::RoundRobin, states, evals, 3) == 1);

    std::mt19937_64 rng_a = make_stream(7, 0, 0);
    std::mt19937_64 rng_b = make_stream(7, 0, 0);
    for (int i = 0; i < 20; ++i)
        CHECK(select_arm(Policy::UniformRandom, states, evals, i, &rng_a) ==
              select_arm(Policy::UniformRandom, states, evals, i, &rng_b));
    CHECK_THROWS_AS(select_arm(Policy::UniformRandom, states, evals, 0, nullptr),
                    DomainError);
}

TEST_CASE("argmax choice is invariant under increasing transforms of the scores") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<double> states = {u(rng), u(rng), u(rng)};
        const double a = u(rng);
        const double b = std::abs(u(rng)) + 0.1;
        auto score = [](int j, double x) { return 0.3 * j + x; };
        auto transformed = [&](int j, double x) { return a + b * score(j, x); };
        auto reward_score = [](int, double x) { return x; };
        const int base = select_arm_scored(Policy::GittinsIndex, states, score,
                                           reward_score, 0, nullptr);
        const int mapped = select_arm_scored(Policy::GittinsIndex, states, transformed,
                                             reward_score, 0, nullptr);
        CHECK(base == mapped);
    }
}

TEST_CASE("unselected arms stay bit-identical across epochs") {
    EpisodeConfig config;
    // Arm 0 dominates under the greedy policy, so arm 1 is never advanced.
    config.arms = {{kBm, Reward::affine(100.0, 1.0), 0.0}, {kBm, kIdentity, 0.25}};
    config.q = 1.0;
    config.lambda = 3.0;
    config.policy = Policy::Greedy;
    config.seed = 3;
    const EpisodeTrace trace = run_episode_traced(config, 0);
    REQUIRE(!trace.states.empty());
    const double frozen = 0.25;
    for (std::size_t k = 0; k < trace.states.size(); ++k) {
        CHECK(trace.selections[k] == 0);
        CHECK(std::memcmp(&trace.states[k][1], &frozen, sizeof(double)) == 0);
    }
}

TEST_CASE("single-arm episode mean matches the never-stop discounted reward") {
    EpisodeConfig config;
    config.arms = {{kBm, kIdentity, 0.3}};
    config.q = 1.0;
    config.lambda = 3.0;
    config.seed = 12;

    const std::int64_t n = 20000;
    KahanSum sum, sum_sq;
    for (std::int64_t e = 0; e < n; ++e) {
        const double v = run_episode(config, e);
        sum.add(v);
        sum_sq.add(v * v);
    }
    const double mean = sum.value() / n;
    const double se = std::sqrt((sum_sq.value() / n - mean * mean) / n);

    const auto oracle = estimate_fixed_rule_value(
        kBm, [](double z) { return z; }, 1.0, 3.0, 0.3, 0.0, StopRule::never(), n, 77);
    const double combined = std::sqrt(se * se + oracle.std_error * oracle.std_error);
    CHECK(std::abs(mean - oracle.mean) < 3.0 * combined);
}

TEST_CASE("near-constant rewards produce the perpetuity value") {
    EpisodeConfig config;
    config.arms = {{kBm, Reward::affine(2.0, 1e-9), 0.0},
                   {kBm, Reward::affine(2.0, 1e-9), 0.0}};
    config.q = 1.0;
    config.lambda = 3.0;
    config.policy = Policy::UniformRandom;
    config.seed = 21;
    const std::int64_t n = 20000;
    KahanSum sum, sum_sq;
    for (std::int64_t e = 0; e < n; ++e) {
        const double v = run_episode(config, e);
        sum.add(v);
        sum_sq.add(v * v);
    }
    const double mean = sum.value() / n;
    const double se = std::sqrt((sum_sq.value() / n - mean * mean) / n);
    CHECK(std::abs(mean - 2.0 * 4.0) < 3.0 * se);  // c (lambda+q)/q = 8
}

TEST_CASE("config validation") {
    EpisodeConfig empty;
    empty.q = 1.0;
    empty.lambda = 1.0;
    CHECK_THROWS_AS(run_episode(empty, 0), DomainError);

    EpisodeConfig config = two_identical_arms();
    const std::vector<Policy> policies = {Policy::GittinsIndex};
    CHECK_THROWS_AS(compare_policies(config, 50, policies), DomainError);
}

TEST_CASE("identical arms are exchangeable across policies") {
    EpisodeConfig config = two_identical_arms();
    const std::vector<Policy> policies = {Policy::GittinsIndex, Policy::RoundRobin,
                                          Policy::UniformRandom};
    const SimReport report = compare_policies(config, 3000, policies);
    REQUIRE(report.paired.size() == 3);
    for (const auto& diff : report.paired)
        CHECK(std::abs(diff.mean) < 3.0 * diff.std_error);
    for (const auto& stats : report.policies) {
        double total = 0.0;
        for (double f : stats.selection_fractions) total += f;
        CHECK(total == doctest::Approx(1.0));
    }
}

TEST_CASE("reports are reproducible") {
    EpisodeConfig config = two_identical_arms();
    const std::vector<Policy> policies = {Policy::GittinsIndex, Policy::UniformRandom};
    const SimReport a = compare_policies(config, 200, policies);
    const SimReport b = compare_policies(config, 200, policies);
    for (std::size_t i = 0; i < a.policies.size(); ++i) {
        CHECK(a.policies[i].mean == b.policies[i].mean);
        CHECK(a.policies[i].std_error == b.policies[i].std_error);
    }
}

TEST_CASE("gittins beats uniform on a two-arm distinct-drift instance") {
    EpisodeConfig config;
    config.arms = {{LevyModel::brownian(0.5, 1.0), kIdentity, 0.0},
                   {LevyModel::brownian(-0.5, 1.0), kIdentity, 0.0}};
    config.q = 1.0;
    config.lambda = 3.0;
    config.seed = 2025;
    const std::vector<Policy> policies = {Policy::GittinsIndex, Policy::UniformRandom};
    const SimReport report = compare_policies(config, 2000, policies);
    REQUIRE(report.paired.size() == 1);
    CHECK(report.paired[0].mean > 0.0);
    CHECK(report.paired[0].mean > 3.0 * report.paired[0].std_error);
}
