#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nswbandit/policy.hpp"
#include "nswbandit/rng.hpp"
#include "nswbandit/simplex_opt.hpp"

namespace nswbandit {

/// Pull counts and running means observed so far.
///
/// At the start of round t (1-based) the pull counts sum to t - 1. Means of
/// arms that were never pulled stay at 0.
class EstimatorState {
public:
    EstimatorState(std::size_t agents, std::size_t arms);

    std::size_t agents() const noexcept { return agents_; }
    std::size_t arms() const noexcept { return arms_; }
    std::uint64_t round() const noexcept { return round_; }
    std::uint64_t pulls(std::size_t arm) const { return pull_counts_.at(arm); }
    std::span<const std::uint64_t> pull_counts() const noexcept { return pull_counts_; }
    double mean(std::size_t agent, std::size_t arm) const noexcept { return means_[agent * arms_ + arm]; }
    RewardMatrix estimates() const;

    // Records the rewards observed for `arm` and advances the round.
    // Throws ContractError if any reward is outside [0, 1], IndexError on a bad arm.
    void update(std::size_t arm, std::span<const double> rewards);

private:
    std::size_t agents_;
    std::size_t arms_;
    std::uint64_t round_ = 1;
    std::vector<std::uint64_t> pull_counts_;
    std::vector<double> means_;
};

enum class ScheduleMode { A, B };

// max(ln(N*K*t), 1).
double clamped_log(std::size_t agents, std::size_t arms, double t);

// sqrt(2 * max(ln(NKt), 1) / n); +infinity when n == 0.
double confidence_radius(std::uint64_t pulls, std::uint64_t t, std::size_t agents, std::size_t arms);

/// Multiplicative constants in front of the schedules. Each schedule is only
/// fixed up to its asymptotic order; all default to 1.
struct ScheduleConstants {
    double explore_first = 1.0;
    double epsilon = 1.0;
};

// Exploration length per arm, clamped to [1, floor(T / (2K))]. Throws ParameterError if T < K.
std::uint64_t explore_first_L(ScheduleMode mode, std::size_t agents, std::size_t arms, std::uint64_t horizon,
                              double constant = 1.0);

// Exploration probability at round t, clamped to [0, 1].
double epsilon_schedule(ScheduleMode mode, std::size_t agents, std::size_t arms, std::uint64_t t,
                        double constant = 1.0);

// A: N. B: sqrt(12 N K max(ln(NKt), 1)).
double ucb_alpha(ScheduleMode mode, std::size_t agents, std::size_t arms, std::uint64_t t);

struct ExploreFirstSpec {
    std::uint64_t horizon;
    std::uint64_t exploration_length;
};
struct EpsilonGreedySpec {
    ScheduleMode mode = ScheduleMode::A;
    double constant = 1.0;
};
struct UcbSpec {
    ScheduleMode mode = ScheduleMode::A;
};
// Replays a fixed policy every round. Not a learning algorithm; used to pin
// regret bookkeeping (e.g. playing p* must give zero regret).
struct FixedPolicySpec {
    std::vector<double> weights;
};

using AgentKind = std::variant<ExploreFirstSpec, EpsilonGreedySpec, UcbSpec, FixedPolicySpec>;

// "explorefirst", "epsgreedy-a", "ucb-b", "fixed", ...
std::string agent_label(const AgentKind& kind);

/// Per-round policy source. One instance per run; not thread-safe.
class Agent {
public:
    virtual ~Agent() = default;

    // Policy for round est.round(). `coin` is the agent's private randomness
    // stream; deterministic agents leave it untouched.
    virtual Policy next_policy(const EstimatorState& est, RngStream& coin) = 0;
    virtual std::string label() const = 0;
};

std::unique_ptr<Agent> make_agent(const AgentKind& kind, std::size_t agents, std::size_t arms,
                                  const OptimizerConfig& cfg = {});

/// Pulls each arm L times in blocks, then plays the NSW-optimal policy for the
/// estimates at round K*L + 1, computed once and cached.
class ExploreFirstAgent final : public Agent {
public:
    // Throws ParameterError unless T >= 1, L >= 1 and K*L <= T.
    ExploreFirstAgent(ExploreFirstSpec spec, std::size_t agents, std::size_t arms, OptimizerConfig cfg = {});

    Policy next_policy(const EstimatorState& est, RngStream& coin) override;
    std::string label() const override;

    const std::optional<Policy>& cached_policy() const noexcept { return cached_; }

private:
    ExploreFirstSpec spec_;
    std::size_t arms_;
    OptimizerConfig cfg_;
    std::optional<Policy> cached_;
};

/// Explores with probability epsilon^t (round-robin over arms), otherwise
/// plays the NSW-optimal policy for the current estimates.
class EpsilonGreedyAgent final : public Agent {
public:
    EpsilonGreedyAgent(EpsilonGreedySpec spec, std::size_t agents, std::size_t arms, OptimizerConfig cfg = {});

    Policy next_policy(const EstimatorState& est, RngStream& coin) override;
    std::string label() const override;

    // 0-based arm the next exploration round will pull.
    std::size_t next_exploration_arm() const noexcept { return next_arm_; }
    bool last_round_explored() const noexcept { return last_explored_; }

private:
    EpsilonGreedySpec spec_;
    std::size_t agents_;
    std::size_t arms_;
    OptimizerConfig cfg_;
    std::size_t next_arm_ = 0;
    bool last_explored_ = false;
};

/// Pulls each arm once, then maximizes NSW(p, mu_hat) + alpha^t * sum_j p_j r_j^t.
class UcbAgent final : public Agent {
public:
    UcbAgent(UcbSpec spec, std::size_t agents, std::size_t arms, OptimizerConfig cfg = {});

    Policy next_policy(const EstimatorState& est, RngStream& coin) override;
    std::string label() const override;

    // Confidence radii for the current state; scaled by `scale` (1 outside fault-injection tests).
    static std::vector<double> radii(const EstimatorState& est, double scale = 1.0);

private:
    UcbSpec spec_;
    std::size_t agents_;
    std::size_t arms_;
    OptimizerConfig cfg_;
};

// Default optimizer settings for per-round calls: restarts reduced to 4.
OptimizerConfig in_loop_optimizer_config();

} // namespace nswbandit
