#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nswbandit/policy.hpp"
#include "nswbandit/rng.hpp"

namespace nswbandit {

struct Bernoulli {
    double mean;
};
struct PointMass {
    double value;
};
struct BetaDist {
    double a;
    double b;
};
struct UniformRange {
    double lo;
    double hi;
};

/// Reward law of one (agent, arm) pair; support always inside [0, 1].
class RewardDistribution {
public:
    using Kind = std::variant<Bernoulli, PointMass, BetaDist, UniformRange>;

    // Each factory throws ParameterError when the parameters leave [0, 1] support.
    static RewardDistribution bernoulli(double mean);
    static RewardDistribution point_mass(double value);
    static RewardDistribution beta(double a, double b);
    static RewardDistribution uniform(double lo, double hi);

    const Kind& kind() const noexcept { return kind_; }
    // "bernoulli", "pointmass", "beta" or "uniform".
    std::string_view kind_name() const noexcept;
    double mean() const noexcept;
    double sample(RngStream& rng) const;

private:
    explicit RewardDistribution(Kind k)
        : kind_(k)
    {
    }
    Kind kind_;
};

/// N x K grid of reward distributions plus their closed-form means.
class BanditInstance {
public:
    BanditInstance(std::size_t agents, std::size_t arms, std::vector<RewardDistribution> row_major,
                   std::string id = "instance");

    std::size_t agents() const noexcept { return agents_; }
    std::size_t arms() const noexcept { return arms_; }
    const std::string& id() const noexcept { return id_; }
    const RewardDistribution& distribution(std::size_t agent, std::size_t arm) const;
    const RewardMatrix& true_means() const noexcept { return true_means_; }

private:
    std::size_t agents_;
    std::size_t arms_;
    std::string id_;
    std::vector<RewardDistribution> distributions_;
    RewardMatrix true_means_;
};

// One independent draw per agent for `arm` (0-based). Throws IndexError on a bad arm.
std::vector<double> sample_rewards(const BanditInstance& instance, std::size_t arm, RngStream& rng);
void sample_rewards(const BanditInstance& instance, std::size_t arm, RngStream& rng, std::span<double> out);

// Inverse-CDF draw of a 0-based arm index from p. Always consumes one uniform.
std::size_t sample_arm(const Policy& p, RngStream& rng);

/// Parses the JSON instance schema:
///   {"agents": N, "arms": K, "distributions": [ N*K row-major entries ]}
/// with entries {"kind": "bernoulli", "mean": m} | {"kind": "pointmass", "value": v}
/// | {"kind": "beta", "a": a, "b": b} | {"kind": "uniform", "lo": l, "hi": h}.
/// An optional "id" string names the instance. Throws ParseError naming the field.
BanditInstance parse_instance(std::string_view text);
BanditInstance load_instance(const std::filesystem::path& path);

// Serializes back to the schema above.
std::string instance_to_json(const BanditInstance& instance);

// N=3, K=3 Bernoulli instance, shipped as data/benchmark_instance.json. Its NSW optimum is the vertex on arm 2.
BanditInstance benchmark_instance();

// Ten agents, two arms, deterministic: four prefer arm 0 (reward 1 vs 0), six prefer arm 1.
BanditInstance split_majority_instance();

} // namespace nswbandit
