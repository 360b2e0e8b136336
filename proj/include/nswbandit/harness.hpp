#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nswbandit/algorithms.hpp"
#include "nswbandit/bandit_env.hpp"
#include "nswbandit/policy.hpp"
#include "nswbandit/simplex_opt.hpp"

namespace nswbandit {

struct OptimalPolicy {
    Policy policy;
    double value = 0.0;
    bool converged = true;
    // Best grid value at resolution 200, when K <= 3.
    std::optional<double> oracle_value;
};

inline constexpr std::size_t kOracleCheckMaxArms = 3;
inline constexpr std::size_t kOracleCheckResolution = 200;
inline constexpr double kOracleCheckSlack = 1e-2;

/// NSW-optimal policy for the true means. Runs maximize_nsw from the uniform
/// policy plus (restarts - 1) random interior starts and keeps the best. For
/// K <= 3 the answer is checked against the resolution-200 grid; a gap above
/// 1e-2 throws InvariantError. Non-convergence is reported, not thrown.
OptimalPolicy optimal_nsw(const RewardMatrix& mu, const OptimizerConfig& cfg = OptimizerConfig::validation_grade());
OptimalPolicy optimal_nsw(const BanditInstance& instance,
                          const OptimizerConfig& cfg = OptimizerConfig::validation_grade());

struct RoundRecord {
    std::uint64_t t;
    Policy policy;
    std::size_t arm;
    std::vector<double> rewards;
    double instant_regret;
};

struct RunTrace {
    std::uint64_t seed = 0;
    std::string agent;
    std::string instance_id;
    std::vector<RoundRecord> rounds;

    double cumulative_regret() const;
};

/// What the observer sees each round. `estimator` is the state at the start
/// of round t, before the round's rewards are folded in.
struct RoundView {
    std::uint64_t t;
    const EstimatorState& estimator;
    const Policy& policy;
    std::size_t arm;
    std::span<const double> rewards;
    double instant_regret;
    double cumulative_regret;
};

using RoundObserver = std::function<void(const RoundView&)>;

struct EpisodeOptions {
    OptimizerConfig optimizer = in_loop_optimizer_config();
};

/// Core episode loop shared by every harness entry point.
///
/// Random streams for seed s: rewards of arm j come from ("env", run j), so the
/// n-th pull of arm j sees the same rewards under every algorithm; arm draws
/// come from "arm-select" and agent coins from "algo-coin".
void simulate(const BanditInstance& instance, const AgentKind& kind, std::uint64_t horizon, std::uint64_t seed,
              const OptimalPolicy& optimum, const EpisodeOptions& options, const RoundObserver& observer);

RunTrace run_episode(const BanditInstance& instance, const AgentKind& kind, std::uint64_t horizon,
                     std::uint64_t seed, const EpisodeOptions& options = {});
RunTrace run_episode(const BanditInstance& instance, const AgentKind& kind, std::uint64_t horizon,
                     std::uint64_t seed, const OptimalPolicy& optimum, const EpisodeOptions& options = {});

// ceil(10^(k/10)) for k = 0, 1, ... up to T, deduplicated, with T appended.
std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t horizon);

struct CurvePoint {
    std::uint64_t t;
    double mean_cum_regret;
    double stderr_cum_regret;
    std::size_t n_seeds;
};

struct RegretCurve {
    std::string agent;
    std::string instance_id;
    std::vector<CurvePoint> points;

    const CurvePoint& at(std::uint64_t t) const;
};

struct TraceRow {
    std::uint64_t seed;
    std::uint64_t t;
    std::size_t arm;
    double instant_regret;
    double cum_regret;
};

struct EnsembleResult {
    RegretCurve curve;
    // Seed-major, round-minor; filled only when traces were requested.
    std::vector<TraceRow> traces;
};

/// Runs one episode per seed and aggregates cumulative regret at the geometric
/// checkpoints (mean and standard error over seeds). Seeds run on OpenMP
/// threads; results are merged in seed order so the output does not depend on
/// the thread count.
EnsembleResult ensemble_regret(const BanditInstance& instance, const AgentKind& kind, std::uint64_t horizon,
                               std::span<const std::uint64_t> seeds, const EpisodeOptions& options = {},
                               bool keep_traces = false);
EnsembleResult ensemble_regret(const BanditInstance& instance, const AgentKind& kind, std::uint64_t horizon,
                               std::span<const std::uint64_t> seeds, const OptimalPolicy& optimum,
                               const EpisodeOptions& options = {}, bool keep_traces = false);

// Single-threaded reference; bit-identical to ensemble_regret.
EnsembleResult ensemble_regret_serial(const BanditInstance& instance, const AgentKind& kind, std::uint64_t horizon,
                                      std::span<const std::uint64_t> seeds, const OptimalPolicy& optimum,
                                      const EpisodeOptions& options = {}, bool keep_traces = false);

// OLS slope of log(mean) against log(t) over checkpoints in [t_min, t_max] with
// mean > 0. Throws AnalysisError with fewer than three such checkpoints.
double fit_regret_slope(const RegretCurve& curve, std::uint64_t t_min, std::uint64_t t_max);

struct CleanEventRow {
    std::uint64_t t;
    std::size_t satisfied;
    std::size_t n_seeds;
    double frequency;
    // 1 - 2/t^3; negative at t = 1.
    double bound;
};

struct CleanEventReport {
    std::vector<CleanEventRow> rows;
};

/// Empirical frequency, over seeds, of the event that every estimate lies
/// within its confidence radius of the true mean, at the start of each
/// checkpoint round. `radius_scale` multiplies every radius (fault injection).
CleanEventReport validate_clean_event(const BanditInstance& instance, const AgentKind& kind, std::uint64_t horizon,
                                      std::span<const std::uint64_t> seeds,
                                      std::span<const std::uint64_t> checkpoints,
                                      const EpisodeOptions& options = {}, double radius_scale = 1.0);

// base, base+1, ..., base+count-1.
std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count);

} // namespace nswbandit
