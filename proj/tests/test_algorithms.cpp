#include "doctest.h"

#include <cmath>
#include <limits>

#include "nswbandit/algorithms.hpp"
#include "nswbandit/errors.hpp"
#include "nswbandit/harness.hpp"
#include "nswbandit/nsw.hpp"

using namespace nswbandit;

TEST_CASE("estimator update examples")
{
    EstimatorState est(2, 3);
    CHECK(est.round() == 1);
    const std::vector<double> r1{0.2, 0.6};
    est.update(0, r1);
    CHECK(est.pulls(0) == 1);
    CHECK(est.mean(0, 0) == doctest::Approx(0.2));
    const std::vector<double> r2{0.4, 0.2};
    est.update(0, r2);
    CHECK(est.mean(0, 0) == doctest::Approx(0.3));
    CHECK(est.mean(1, 0) == doctest::Approx(0.4));
    CHECK(est.mean(0, 1) == 0.0);
    CHECK(est.mean(1, 1) == 0.0);
    CHECK(est.round() == 3);

    const std::vector<double> bad{0.2, 1.2};
    CHECK_THROWS_AS(est.update(1, bad), ContractError);
    CHECK(est.round() == 3);
    CHECK(est.pulls(1) == 0);
    CHECK_THROWS_AS(est.update(3, r1), IndexError);
    const std::vector<double> short_rewards{0.2};
    CHECK_THROWS_AS(est.update(1, short_rewards), DimensionError);
}

TEST_CASE("confidence radius examples")
{
    CHECK(confidence_radius(4, 25, 2, 2) == doctest::Approx(1.51745).epsilon(1e-5));
    CHECK(confidence_radius(4, 25, 2, 2) == doctest::Approx(std::sqrt(2 * std::log(100.0) / 4)));
    CHECK(confidence_radius(0, 10, 2, 2) == std::numeric_limits<double>::infinity());
    double prev = confidence_radius(1, 100, 3, 3);
    for (std::uint64_t n = 2; n < 100000; n *= 3) {
        const double r = confidence_radius(n, 100, 3, 3);
        CHECK(r < prev);
        prev = r;
    }
    CHECK(confidence_radius(1000000000, 100, 3, 3) < 1e-3);
    // Clamp: ln(1) = 0 is raised to 1.
    CHECK(confidence_radius(2, 1, 1, 1) == doctest::Approx(1.0));
}

TEST_CASE("property: radius times sqrt(n) is constant in n")
{
    for (std::uint64_t t : {1u, 7u, 1000u}) {
        const double c = confidence_radius(1, t, 3, 4);
        for (std::uint64_t n = 1; n < 5000; n += 37) {
            REQUIRE(confidence_radius(n, t, 3, 4) * std::sqrt(static_cast<double>(n)) ==
                    doctest::Approx(c).epsilon(1e-12));
        }
    }
}

TEST_CASE("explore_first_L examples")
{
    for (std::uint64_t T : {10u, 100u, 1000u, 100000u}) {
        const double raw = std::ceil(std::pow(static_cast<double>(T), 2.0 / 3.0) *
                                     std::cbrt(std::max(std::log(static_cast<double>(T)), 1.0)));
        const double clamped = std::min(std::max(raw, 1.0), std::floor(T / 2.0));
        CHECK(explore_first_L(ScheduleMode::A, 1, 1, T) == static_cast<std::uint64_t>(clamped));
    }
    CHECK(explore_first_L(ScheduleMode::A, 3, 5, 5) == 1);
    CHECK(explore_first_L(ScheduleMode::B, 3, 5, 5) == 1);
    for (std::size_t n : {1u, 3u, 10u}) {
        for (std::size_t k : {1u, 2u, 5u}) {
            for (std::uint64_t T : {5u, 50u, 5000u}) {
                for (auto mode : {ScheduleMode::A, ScheduleMode::B}) {
                    const auto l = explore_first_L(mode, n, k, T);
                    CHECK(l >= 1);
                    if (2 * k <= T) {
                        CHECK(2 * k * l <= T);
                    }
                }
            }
        }
    }
    // Mode B: N^{1/3} K^{-1/3} T^{2/3} ln^{2/3}(NKT).
    const double b = std::ceil(std::cbrt(2.0 / 3.0) * std::pow(1e6, 2.0 / 3.0) * std::pow(std::log(6e6), 2.0 / 3.0));
    CHECK(explore_first_L(ScheduleMode::B, 2, 3, 1000000) == static_cast<std::uint64_t>(b));
    CHECK_THROWS_AS(explore_first_L(ScheduleMode::A, 1, 5, 4), ParameterError);
}

TEST_CASE("epsilon schedule examples")
{
    CHECK(epsilon_schedule(ScheduleMode::A, 3, 3, 1) == 1.0);
    CHECK(epsilon_schedule(ScheduleMode::B, 3, 3, 5) == 1.0);
    CHECK(epsilon_schedule(ScheduleMode::A, 1, 1, 1000000) == doctest::Approx(0.02404).epsilon(1e-3));
    CHECK(epsilon_schedule(ScheduleMode::A, 1, 1, 1000000) ==
          doctest::Approx(0.01 * std::cbrt(std::log(1e6))).epsilon(1e-12));
    CHECK(epsilon_schedule(ScheduleMode::A, 1, 1, 1000000000000ULL) < 1e-3);
    double prev = 1.0;
    for (std::uint64_t t = 1; t < 10000000; t = t * 2 + 1) {
        const double e = epsilon_schedule(ScheduleMode::B, 2, 2, t);
        CHECK(e >= 0.0);
        CHECK(e <= prev + 1e-15);
        prev = e;
    }
    // Clamp engages for every t <= K on the benchmark shape.
    for (std::uint64_t t = 1; t <= 3; ++t) {
        CHECK(epsilon_schedule(ScheduleMode::A, 3, 3, t) == 1.0);
        CHECK(epsilon_schedule(ScheduleMode::B, 3, 3, t) == 1.0);
    }
}

TEST_CASE("ucb alpha examples")
{
    CHECK(ucb_alpha(ScheduleMode::A, 7, 4, 1) == 7.0);
    CHECK(ucb_alpha(ScheduleMode::A, 7, 4, 123456) == 7.0);
    CHECK(ucb_alpha(ScheduleMode::B, 1, 1, 2) == doctest::Approx(3.4641).epsilon(1e-4));
    double prev = 0.0;
    for (std::uint64_t t = 1; t < 1000000; t *= 3) {
        const double a = ucb_alpha(ScheduleMode::B, 2, 3, t);
        CHECK(a >= prev);
        prev = a;
    }
}

TEST_CASE("agent labels")
{
    CHECK(agent_label(ExploreFirstSpec{10, 2}) == "explorefirst");
    CHECK(agent_label(EpsilonGreedySpec{ScheduleMode::A}) == "epsgreedy-a");
    CHECK(agent_label(UcbSpec{ScheduleMode::B}) == "ucb-b");
    CHECK(agent_label(FixedPolicySpec{{0.5, 0.5}}) == "fixed");
}

TEST_CASE("explore-first policy examples")
{
    RngStream coin(0, "algo-coin");
    {
        ExploreFirstAgent agent(ExploreFirstSpec{10, 2}, 1, 2);
        EstimatorState est(1, 2);
        const std::vector<double> r{0.5};
        for (int i = 0; i < 2; ++i) {
            agent.next_policy(est, coin);
            est.update(0, r);
        }
        CHECK(agent.next_policy(est, coin) == Policy::vertex(2, 1));
    }
    {
        ExploreFirstAgent agent(ExploreFirstSpec{10, 1}, 1, 3);
        EstimatorState est(1, 3);
        agent.next_policy(est, coin);
        est.update(0, std::vector<double>{0.5});
        CHECK(agent.next_policy(est, coin) == Policy::vertex(3, 1));
    }
    CHECK_THROWS_AS(ExploreFirstAgent(ExploreFirstSpec{5, 3}, 1, 2), ParameterError);
    CHECK_THROWS_AS(ExploreFirstAgent(ExploreFirstSpec{5, 0}, 1, 2), ParameterError);
}

TEST_CASE("explore-first caches the NSW optimum on the split-majority instance")
{
    const BanditInstance inst = split_majority_instance();
    const std::uint64_t T = 40;
    const std::uint64_t L = 3;
    const RunTrace trace = run_episode(inst, ExploreFirstSpec{T, L}, T, 0);
    for (std::uint64_t t = 1; t <= 2 * L; ++t) {
        CHECK(trace.rounds[t - 1].arm == (t - 1) / L);
        CHECK(trace.rounds[t - 1].policy == Policy::vertex(2, (t - 1) / L));
    }
    const Policy& first = trace.rounds[2 * L].policy;
    CHECK(l1_distance(first, Policy({0.4, 0.6})) <= 1e-3);
    for (std::uint64_t t = 2 * L + 1; t <= T; ++t) {
        CHECK(trace.rounds[t - 1].policy == first);
    }

    ExploreFirstAgent agent(ExploreFirstSpec{2, 1}, 1, 2);
    EstimatorState est(1, 2);
    RngStream coin(0, "algo-coin");
    const std::vector<double> r{0.5};
    for (int i = 0; i < 2; ++i) {
        est.update(agent.next_policy(est, coin)[0] == 1.0 ? 0 : 1, r);
    }
    CHECK_THROWS_AS(agent.next_policy(est, coin), ContractError);
}

TEST_CASE("epsilon-greedy explores arms in order while epsilon is clamped to 1")
{
    const BanditInstance inst = split_majority_instance();
    EpsilonGreedyAgent agent(EpsilonGreedySpec{ScheduleMode::A}, 10, 2);
    EstimatorState est(10, 2);
    RngStream coin(0, "algo-coin");
    RngStream env(0, "env");
    for (std::size_t t = 0; t < 4; ++t) {
        const Policy p = agent.next_policy(est, coin);
        CHECK(agent.last_round_explored());
        CHECK(p == Policy::vertex(2, t % 2));
        est.update(t % 2, sample_rewards(inst, t % 2, env));
        // The counter wraps back to arm 0 after K exploration rounds.
        CHECK(agent.next_exploration_arm() == (t + 1) % 2);
    }
}

TEST_CASE("epsilon-greedy exploitation with exact estimates plays the NSW optimum")
{
    const BanditInstance inst = split_majority_instance();
    EpsilonGreedyAgent agent(EpsilonGreedySpec{ScheduleMode::A, 0.01}, 10, 2);
    EstimatorState est(10, 2);
    RngStream env(0, "env");
    est.update(0, sample_rewards(inst, 0, env));
    est.update(1, sample_rewards(inst, 1, env));
    RngStream coin(0, "algo-coin");
    int exploited = 0;
    for (int i = 0; i < 50; ++i) {
        const Policy p = agent.next_policy(est, coin);
        if (!agent.last_round_explored()) {
            CHECK(l1_distance(p, Policy({0.4, 0.6})) <= 1e-3);
            ++exploited;
        }
    }
    CHECK(exploited > 0);
}

TEST_CASE("epsilon-greedy exploitation before every arm is pulled treats unseen arms as zero")
{
    EpsilonGreedyAgent agent(EpsilonGreedySpec{ScheduleMode::A, 1e-9}, 1, 3);
    EstimatorState est(1, 3);
    est.update(1, std::vector<double>{0.4});
    RngStream coin(1, "algo-coin");
    const Policy p = agent.next_policy(est, coin);
    CHECK_FALSE(agent.last_round_explored());
    CHECK(p[1] >= 0.999);
}

TEST_CASE("property: epsilon-greedy exploration pulls cycle round-robin")
{
    const BanditInstance inst = benchmark_instance();
    EpsilonGreedyAgent agent(EpsilonGreedySpec{ScheduleMode::B}, 3, 3);
    EstimatorState est(3, 3);
    RngStream coin(2, "algo-coin");
    RngStream env(2, "env");
    RngStream pick(2, "arm-select");
    std::size_t expected = 0;
    int explorations = 0;
    for (int t = 0; t < 3000; ++t) {
        const Policy p = agent.next_policy(est, coin);
        const std::size_t arm = sample_arm(p, pick);
        if (agent.last_round_explored()) {
            REQUIRE(arm == expected);
            expected = (expected + 1) % 3;
            ++explorations;
        }
        est.update(arm, sample_rewards(inst, arm, env));
    }
    CHECK(explorations > 100);
}

TEST_CASE("ucb examples")
{
    UcbAgent agent(UcbSpec{ScheduleMode::A}, 1, 3);
    EstimatorState est(1, 3);
    RngStream coin(0, "algo-coin");
    CHECK(agent.next_policy(est, coin) == Policy::vertex(3, 0));
    est.update(0, std::vector<double>{0.5});
    CHECK(agent.next_policy(est, coin) == Policy::vertex(3, 1));
}

TEST_CASE("ucb radii scale")
{
    EstimatorState est(2, 2);
    est.update(0, std::vector<double>{0.5, 0.5});
    est.update(1, std::vector<double>{0.5, 0.5});
    est.update(1, std::vector<double>{0.5, 0.5});
    const auto r = UcbAgent::radii(est);
    CHECK(r[0] == doctest::Approx(confidence_radius(1, 4, 2, 2)));
    CHECK(r[1] == doctest::Approx(confidence_radius(2, 4, 2, 2)));
    const auto half = UcbAgent::radii(est, 0.5);
    CHECK(half[0] == doctest::Approx(0.5 * r[0]));
}

TEST_CASE("ucb approaches the NSW optimum once radii are tiny")
{
    // Huge pull counts with exact estimates: the bonus vanishes.
    const BanditInstance inst = split_majority_instance();
    EstimatorState est(10, 2);
    RngStream env(0, "env");
    for (int i = 0; i < 200000; ++i) {
        const std::size_t arm = static_cast<std::size_t>(i % 2);
        est.update(arm, sample_rewards(inst, arm, env));
    }
    UcbAgent agent(UcbSpec{ScheduleMode::A}, 10, 2);
    RngStream coin(0, "algo-coin");
    const Policy p = agent.next_policy(est, coin);
    const Policy star = maximize_nsw(inst.true_means()).policy;
    CHECK(l1_distance(p, star) <= 1e-2);
}

TEST_CASE("ucb favors the arm with the largest radius when estimates tie")
{
    EstimatorState est(1, 2);
    est.update(0, std::vector<double>{0.5});
    est.update(1, std::vector<double>{0.5});
    for (int i = 0; i < 50; ++i) {
        est.update(0, std::vector<double>{0.5});
    }
    const auto r = UcbAgent::radii(est);
    CHECK(r[1] > r[0]);
    UcbAgent agent(UcbSpec{ScheduleMode::A}, 1, 2);
    RngStream coin(0, "algo-coin");
    const Policy p = agent.next_policy(est, coin);
    CHECK(p[1] >= 0.5);
    // With N = 1 the objective is linear, so the oracle picks the vertex of the larger coefficient.
    CHECK(p == Policy::vertex(2, 1));
}

TEST_CASE("property: pull counts sum to t - 1 for every agent kind")
{
    const BanditInstance inst = benchmark_instance();
    const std::vector<AgentKind> kinds{ExploreFirstSpec{300, 20}, EpsilonGreedySpec{ScheduleMode::A},
                                       EpsilonGreedySpec{ScheduleMode::B}, UcbSpec{ScheduleMode::A},
                                       UcbSpec{ScheduleMode::B}, FixedPolicySpec{{0.2, 0.3, 0.5}}};
    const OptimalPolicy opt = optimal_nsw(inst);
    for (const auto& kind : kinds) {
        std::uint64_t checked = 0;
        simulate(inst, kind, 300, 3, opt, {}, [&](const RoundView& v) {
            std::uint64_t sum = 0;
            for (auto n : v.estimator.pull_counts()) {
                sum += n;
            }
            REQUIRE(sum == v.t - 1);
            REQUIRE(v.estimator.round() == v.t);
            if (std::holds_alternative<UcbSpec>(kind)) {
                if (v.t <= 3) {
                    REQUIRE(v.arm == v.t - 1);
                } else {
                    for (auto n : v.estimator.pull_counts()) {
                        REQUIRE(n >= 1);
                    }
                }
            }
            ++checked;
        });
        CHECK(checked == 300);
    }
}

TEST_CASE("property: explore-first exploration is blocked, each arm L times")
{
    const BanditInstance inst = benchmark_instance();
    const RunTrace trace = run_episode(inst, ExploreFirstSpec{200, 7}, 200, 5);
    std::vector<int> counts(3, 0);
    for (std::size_t t = 0; t < 21; ++t) {
        CHECK(trace.rounds[t].arm == t / 7);
        counts[trace.rounds[t].arm]++;
    }
    CHECK(counts == std::vector<int>{7, 7, 7});
}

TEST_CASE("property: estimates are unbiased under UCB")
{
    const BanditInstance inst = benchmark_instance();
    const OptimalPolicy opt = optimal_nsw(inst);
    const std::size_t runs = 200;
    const std::uint64_t T = 2000;
    const std::size_t arm = 0;
    std::vector<double> sum(3, 0.0);
    std::vector<double> sumsq(3, 0.0);
    for (std::uint64_t seed = 0; seed < runs; ++seed) {
        EstimatorState last(3, 3);
        simulate(inst, UcbSpec{ScheduleMode::A}, T, seed, opt, {}, [&](const RoundView& v) {
            if (v.t == T) {
                last = v.estimator;
            }
        });
        for (std::size_t i = 0; i < 3; ++i) {
            sum[i] += last.mean(i, arm);
            sumsq[i] += last.mean(i, arm) * last.mean(i, arm);
        }
    }
    for (std::size_t i = 0; i < 3; ++i) {
        const double mean = sum[i] / runs;
        const double var = (sumsq[i] - runs * mean * mean) / (runs - 1);
        const double se = std::sqrt(var / runs);
        CHECK(std::abs(mean - inst.true_means()(i, arm)) <= 3 * se);
    }
}
