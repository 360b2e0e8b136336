#include "nswbandit/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nswbandit/errors.hpp"

namespace nswbandit {

EstimatorState::EstimatorState(std::size_t agents, std::size_t arms)
    : agents_(agents)
    , arms_(arms)
    , pull_counts_(arms, 0)
    , means_(agents * arms, 0.0)
{
    if (agents == 0 || arms == 0) {
        throw ParameterError("estimator needs N >= 1 and K >= 1");
    }
}

RewardMatrix EstimatorState::estimates() const
{
    return RewardMatrix(agents_, arms_, means_);
}

void EstimatorState::update(std::size_t arm, std::span<const double> rewards)
{
    if (arm >= arms_) {
        throw IndexError("arm " + std::to_string(arm) + " out of range for K=" + std::to_string(arms_));
    }
    if (rewards.size() != agents_) {
        throw DimensionError("reward vector has " + std::to_string(rewards.size()) + " entries, expected "
                             + std::to_string(agents_));
    }
    for (double r : rewards) {
        if (!(r >= 0.0 && r <= 1.0)) {
            throw ContractError("reward " + std::to_string(r) + " outside [0,1]");
        }
    }
    const std::uint64_t n = ++pull_counts_[arm];
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < agents_; ++i) {
        double& m = means_[i * arms_ + arm];
        m += (rewards[i] - m) * inv;
        // The incremental form can drift an ulp outside [0,1].
        m = std::clamp(m, 0.0, 1.0);
    }
    ++round_;
}

double clamped_log(std::size_t agents, std::size_t arms, double t)
{
    return std::max(std::log(static_cast<double>(agents) * static_cast<double>(arms) * t), 1.0);
}

double confidence_radius(std::uint64_t pulls, std::uint64_t t, std::size_t agents, std::size_t arms)
{
    if (pulls == 0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::sqrt(2.0 * clamped_log(agents, arms, static_cast<double>(t)) / static_cast<double>(pulls));
}

std::uint64_t explore_first_L(ScheduleMode mode, std::size_t agents, std::size_t arms, std::uint64_t horizon,
                              double constant)
{
    if (horizon < arms) {
        throw ParameterError("explore-first needs T >= K");
    }
    const double n = static_cast<double>(agents);
    const double k = static_cast<double>(arms);
    const double t = static_cast<double>(horizon);
    const double lg = clamped_log(agents, arms, t);
    const double raw = mode == ScheduleMode::A
        ? std::pow(n, 2.0 / 3.0) * std::pow(k, -2.0 / 3.0) * std::pow(t, 2.0 / 3.0) * std::cbrt(lg)
        : std::cbrt(n) * std::pow(k, -1.0 / 3.0) * std::pow(t, 2.0 / 3.0) * std::pow(lg, 2.0 / 3.0);
    const double cap = std::floor(t / (2.0 * k));
    const double l = std::min(std::ceil(constant * raw), cap);
    return static_cast<std::uint64_t>(std::max(l, 1.0));
}

double epsilon_schedule(ScheduleMode mode, std::size_t agents, std::size_t arms, std::uint64_t t, double constant)
{
    if (t == 0) {
        throw ParameterError("rounds are 1-based");
    }
    const double n = static_cast<double>(agents);
    const double k = static_cast<double>(arms);
    const double td = static_cast<double>(t);
    const double lg = clamped_log(agents, arms, td);
    const double raw = mode == ScheduleMode::A
        ? std::pow(n, 2.0 / 3.0) * std::cbrt(k) * std::pow(td, -1.0 / 3.0) * std::cbrt(lg)
        : std::cbrt(n) * std::pow(k, 2.0 / 3.0) * std::pow(td, -1.0 / 3.0) * std::pow(lg, 2.0 / 3.0);
    return std::clamp(constant * raw, 0.0, 1.0);
}

double ucb_alpha(ScheduleMode mode, std::size_t agents, std::size_t arms, std::uint64_t t)
{
    if (mode == ScheduleMode::A) {
        return static_cast<double>(agents);
    }
    return std::sqrt(12.0 * static_cast<double>(agents) * static_cast<double>(arms)
                     * clamped_log(agents, arms, static_cast<double>(t)));
}

namespace {

char mode_char(ScheduleMode m) { return m == ScheduleMode::A ? 'a' : 'b'; }

} // namespace

std::string agent_label(const AgentKind& kind)
{
    struct Visitor {
        std::string operator()(const ExploreFirstSpec&) const { return "explorefirst"; }
        std::string operator()(const EpsilonGreedySpec& s) const
        {
            return std::string("epsgreedy-") + mode_char(s.mode);
        }
        std::string operator()(const UcbSpec& s) const { return std::string("ucb-") + mode_char(s.mode); }
        std::string operator()(const FixedPolicySpec&) const { return "fixed"; }
    };
    return std::visit(Visitor{}, kind);
}

OptimizerConfig in_loop_optimizer_config()
{
    OptimizerConfig cfg;
    cfg.restarts = 4;
    return cfg;
}

ExploreFirstAgent::ExploreFirstAgent(ExploreFirstSpec spec, std::size_t /*agents*/, std::size_t arms,
                                     OptimizerConfig cfg)
    : spec_(spec)
    , arms_(arms)
    , cfg_(cfg)
{
    if (spec_.horizon < 1) {
        throw ParameterError("explore-first horizon must be >= 1");
    }
    if (spec_.exploration_length < 1) {
        throw ParameterError("explore-first exploration length must be >= 1");
    }
    if (arms_ * spec_.exploration_length > spec_.horizon) {
        throw ParameterError("explore-first needs K*L <= T");
    }
}

Policy ExploreFirstAgent::next_policy(const EstimatorState& est, RngStream& /*coin*/)
{
    const std::uint64_t t = est.round();
    if (t > spec_.horizon) {
        throw ContractError("explore-first asked for round " + std::to_string(t) + " past horizon "
                            + std::to_string(spec_.horizon));
    }
    const std::uint64_t explore_rounds = arms_ * spec_.exploration_length;
    if (t <= explore_rounds) {
        // ceil(t / L) in 1-based arms is (t - 1) / L in 0-based arms.
        return Policy::vertex(arms_, static_cast<std::size_t>((t - 1) / spec_.exploration_length));
    }
    if (!cached_) {
        cached_ = maximize_nsw(est.estimates(), cfg_).policy;
    }
    return *cached_;
}

std::string ExploreFirstAgent::label() const { return "explorefirst"; }

EpsilonGreedyAgent::EpsilonGreedyAgent(EpsilonGreedySpec spec, std::size_t agents, std::size_t arms,
                                       OptimizerConfig cfg)
    : spec_(spec)
    , agents_(agents)
    , arms_(arms)
    , cfg_(cfg)
{
    if (!(spec_.constant > 0.0)) {
        throw ParameterError("epsilon schedule constant must be positive");
    }
}

Policy EpsilonGreedyAgent::next_policy(const EstimatorState& est, RngStream& coin)
{
    const double eps = epsilon_schedule(spec_.mode, agents_, arms_, est.round(), spec_.constant);
    last_explored_ = coin.bernoulli(eps);
    if (last_explored_) {
        const std::size_t arm = next_arm_;
        next_arm_ = (next_arm_ + 1) % arms_;
        return Policy::vertex(arms_, arm);
    }
    return maximize_nsw(est.estimates(), cfg_).policy;
}

std::string EpsilonGreedyAgent::label() const { return agent_label(spec_); }

UcbAgent::UcbAgent(UcbSpec spec, std::size_t agents, std::size_t arms, OptimizerConfig cfg)
    : spec_(spec)
    , agents_(agents)
    , arms_(arms)
    , cfg_(cfg)
{
}

std::vector<double> UcbAgent::radii(const EstimatorState& est, double scale)
{
    std::vector<double> r(est.arms());
    for (std::size_t j = 0; j < est.arms(); ++j) {
        r[j] = scale * confidence_radius(est.pulls(j), est.round(), est.agents(), est.arms());
    }
    return r;
}

Policy UcbAgent::next_policy(const EstimatorState& est, RngStream& /*coin*/)
{
    const std::uint64_t t = est.round();
    if (t <= arms_) {
        return Policy::vertex(arms_, static_cast<std::size_t>(t - 1));
    }
    const std::vector<double> r = radii(est);
    for (std::size_t j = 0; j < arms_; ++j) {
        if (!std::isfinite(r[j])) {
            throw ContractError("UCB reached round " + std::to_string(t) + " with arm " + std::to_string(j)
                                + " never pulled");
        }
    }
    return maximize_ucb_objective(est.estimates(), r, ucb_alpha(spec_.mode, agents_, arms_, t), cfg_).policy;
}

std::string UcbAgent::label() const { return agent_label(spec_); }

namespace {

class FixedPolicyAgent final : public Agent {
public:
    FixedPolicyAgent(const FixedPolicySpec& spec, std::size_t arms)
        : policy_(spec.weights)
    {
        if (policy_.arms() != arms) {
            throw DimensionError("fixed policy arm count differs from instance");
        }
    }
    Policy next_policy(const EstimatorState&, RngStream&) override { return policy_; }
    std::string label() const override { return "fixed"; }

private:
    Policy policy_;
};

} // namespace

std::unique_ptr<Agent> make_agent(const AgentKind& kind, std::size_t agents, std::size_t arms,
                                  const OptimizerConfig& cfg)
{
    struct Visitor {
        std::size_t agents;
        std::size_t arms;
        const OptimizerConfig& cfg;
        std::unique_ptr<Agent> operator()(const ExploreFirstSpec& s) const
        {
            return std::make_unique<ExploreFirstAgent>(s, agents, arms, cfg);
        }
        std::unique_ptr<Agent> operator()(const EpsilonGreedySpec& s) const
        {
            return std::make_unique<EpsilonGreedyAgent>(s, agents, arms, cfg);
        }
        std::unique_ptr<Agent> operator()(const UcbSpec& s) const
        {
            return std::make_unique<UcbAgent>(s, agents, arms, cfg);
        }
        std::unique_ptr<Agent> operator()(const FixedPolicySpec& s) const
        {
            return std::make_unique<FixedPolicyAgent>(s, arms);
        }
    };
    return std::visit(Visitor{agents, arms, cfg}, kind);
}

} // namespace nswbandit
