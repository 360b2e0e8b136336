#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "nswbandit/nsw.hpp"
#include "nswbandit/policy.hpp"

namespace nswbandit {

struct OptimizerConfig {
    int max_iterations = 5000;
    double step_init = 1.0;
    // Stop once a step improves the objective by less than this.
    double tolerance = 1e-10;
    int restarts = 4;
    double utility_floor = kDefaultUtilityFloor;
    // Keep the per-iteration objective sequence of every restart in OptResult::traces.
    bool record_trace = false;

    // Throws ParameterError on an out-of-domain field.
    void validate() const;

    // restarts 32, tolerance 1e-12; used for the optimal policy that regret is measured against.
    static OptimizerConfig validation_grade();
};

struct OptResult {
    explicit OptResult(Policy p) : policy(std::move(p)) {}

    Policy policy;
    double objective_value = 0.0;
    int iterations_used = 0;
    bool converged = false;
    // One objective sequence per restart, only when OptimizerConfig::record_trace is set.
    std::vector<std::vector<double>> traces;
};

// Euclidean projection of v onto the probability simplex (sort-based, O(K log K)).
void project_to_simplex(std::span<const double> v, std::span<double> out);
std::vector<double> project_to_simplex(std::span<const double> v);

// Gradient of sum_i log(max(u_i, floor)) w.r.t. p, with each agent's term taken
// at max(u_i, floor) so it stays bounded on the boundary.
void log_nsw_gradient(std::span<const double> p, const RewardMatrix& mu, double floor, std::span<double> grad);

// Gradient of NSW(p, mu) + alpha * <p, radii> w.r.t. p.
void ucb_objective_gradient(std::span<const double> p, const RewardMatrix& mu, std::span<const double> radii,
                            double alpha, std::span<double> grad);

double ucb_objective(const Policy& p, const RewardMatrix& mu, std::span<const double> radii, double alpha);

/// Maximizes NSW(., mu) over the simplex by projected gradient ascent on the
/// floored log-NSW, starting from the uniform policy. If some agent's row is
/// all zero every policy scores 0 and the uniform policy is returned as
/// converged. objective_value is NSW (not its log).
OptResult maximize_nsw(const RewardMatrix& mu, const OptimizerConfig& cfg = {});

// Same ascent from an explicit start point.
OptResult maximize_nsw_from(const RewardMatrix& mu, const Policy& start, const OptimizerConfig& cfg = {});

/// Best-effort maximizer of NSW(p, mu) + alpha * sum_j p_j * radii_j.
///
/// The objective is not log-concave, so plain projected ascent on it is run
/// from several seeds: the uniform policy, every vertex, the maximize_nsw
/// solution, then max(0, restarts - K - 2) uniform-random points from a fixed
/// internal stream. The best endpoint wins; ties go to the earliest seed.
OptResult maximize_ucb_objective(const RewardMatrix& mu, std::span<const double> radii, double alpha,
                                 const OptimizerConfig& cfg = {});

using PolicyObjective = std::function<double(const Policy&)>;

inline constexpr std::size_t kBruteForceMaxArms = 6;

/// Exhaustive search over all policies whose coordinates are multiples of
/// 1/resolution. The grid is an L1 cover of radius K/resolution. Ties go to the
/// first grid point in descending lexicographic order. Evaluation is spread
/// over OpenMP threads, so `objective` must be safe to call concurrently.
/// Throws ParameterError if K > 6 or resolution == 0.
OptResult brute_force_maximize(const PolicyObjective& objective, std::size_t arms, std::size_t resolution);

// Single-threaded reference for brute_force_maximize; identical result.
OptResult brute_force_maximize_serial(const PolicyObjective& objective, std::size_t arms, std::size_t resolution);

} // namespace nswbandit
