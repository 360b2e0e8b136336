#include "nswbandit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nswbandit/errors.hpp"
#include "nswbandit/nsw.hpp"

namespace nswbandit {

OptimalPolicy optimal_nsw(const RewardMatrix& mu, const OptimizerConfig& cfg)
{
    cfg.validate();
    OptResult best = maximize_nsw(mu, cfg);
    bool all_converged = best.converged;
    RngStream rng(0, "optimal-restarts");
    for (int r = 1; r < cfg.restarts; ++r) {
        const Policy start = sample_uniform_simplex(mu.arms(), rng);
        OptResult cand = maximize_nsw_from(mu, start, cfg);
        all_converged = all_converged && cand.converged;
        if (cand.objective_value > best.objective_value) {
            best = std::move(cand);
        }
    }

    OptimalPolicy out{best.policy, best.objective_value, all_converged, std::nullopt};
    if (mu.arms() <= kOracleCheckMaxArms) {
        const OptResult grid = brute_force_maximize(
            [&mu](const Policy& p) { return nsw_eval(p, mu); }, mu.arms(), kOracleCheckResolution);
        out.oracle_value = grid.objective_value;
        if (grid.objective_value > out.value + kOracleCheckSlack) {
            throw InvariantError("optimal NSW " + std::to_string(out.value) + " falls short of grid value "
                                 + std::to_string(grid.objective_value));
        }
    }
    return out;
}

OptimalPolicy optimal_nsw(const BanditInstance& instance, const OptimizerConfig& cfg)
{
    return optimal_nsw(instance.true_means(), cfg);
}

double RunTrace::cumulative_regret() const
{
    double total = 0.0;
    for (const auto& r : rounds) {
        total += r.instant_regret;
    }
    return total;
}

void simulate(const BanditInstance& instance, const AgentKind& kind, std::uint64_t horizon, std::uint64_t seed,
              const OptimalPolicy& optimum, const EpisodeOptions& options, const RoundObserver& observer)
{
    if (horizon < 1) {
        throw ParameterError("horizon must be >= 1");
    }
    const std::size_t n = instance.agents();
    const std::size_t k = instance.arms();
    if (optimum.policy.arms() != k) {
        throw DimensionError("optimal policy arm count differs from instance");
    }
    std::unique_ptr<Agent> agent = make_agent(kind, n, k, options.optimizer);

    std::vector<RngStream> env;
    env.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        env.emplace_back(seed, "env", j);
    }
    RngStream arm_rng(seed, "arm-select");
    RngStream coin(seed, "algo-coin");

    EstimatorState est(n, k);
    std::vector<double> rewards(n);
    const RewardMatrix& mu = instance.true_means();
    double cumulative = 0.0;
    for (std::uint64_t t = 1; t <= horizon; ++t) {
        const Policy p = agent->next_policy(est, coin);
        const std::size_t arm = sample_arm(p, arm_rng);
        sample_rewards(instance, arm, env[arm], rewards);
        const double regret = optimum.value - nsw_eval(p, mu);
        cumulative += regret;
        if (observer) {
            observer(RoundView{t, est, p, arm, rewards, regret, cumulative});
        }
        est.update(arm, rewards);
    }
}

RunTrace run_episode(const BanditInstance& instance, const AgentKind& kind, std::uint64_t horizon,
                     std::uint64_t seed, const OptimalPolicy& optimum, const EpisodeOptions& options)
{
    RunTrace trace;
    trace.seed = seed;
    trace.agent = agent_label(kind);
    trace.instance_id = instance.id();
    trace.rounds.reserve(horizon);
    simulate(instance, kind, horizon, seed, optimum, options, [&](const RoundView& v) {
        trace.rounds.push_back(
            RoundRecord{v.t, v.policy, v.arm, {v.rewards.begin(), v.rewards.end()}, v.instant_regret});
    });
    return trace;
}

RunTrace run_episode(const BanditInstance& instance, const AgentKind& kind, std::uint64_t horizon,
                     std::uint64_t seed, const EpisodeOptions& options)
{
    return run_episode(instance, kind, horizon, seed, optimal_nsw(instance), options);
}

std::vector<std::uint64_t> geometric_checkpoints(std::uint64_t horizon)
{
    if (horizon < 1) {
        throw ParameterError("horizon must be >= 1");
    }
    std::vector<std::uint64_t> out;
    for (int k = 0;; ++k) {
        // The 1e-9 keeps exact decades (10^3 = 1000) from rounding up to 1001.
        const double v = std::ceil(std::pow(10.0, k / 10.0) - 1e-9);
        const auto t = static_cast<std::uint64_t>(v);
        if (t > horizon) {
            break;
        }
        if (out.empty() || out.back() != t) {
            out.push_back(t);
        }
    }
    if (out.back() != horizon) {
        out.push_back(horizon);
    }
    return out;
}

const CurvePoint& RegretCurve::at(std::uint64_t t) const
{
    for (const auto& p : points) {
        if (p.t == t) {
            return p;
        }
    }
    throw IndexError("no checkpoint at t=" + std::to_string(t));
}

namespace {

struct SeedOutcome {
    std::vector<double> cumulative_at_checkpoints;
    std::vector<TraceRow> trace;
    std::exception_ptr error;
};

SeedOutcome run_seed(const BanditInstance& instance, const AgentKind& kind, std::uint64_t horizon,
                     std::uint64_t seed, const OptimalPolicy& optimum, const EpisodeOptions& options,
                     const std::vector<std::uint64_t>& checkpoints, bool keep_traces)
{
    SeedOutcome out;
    out.cumulative_at_checkpoints.reserve(checkpoints.size());
    if (keep_traces) {
        out.trace.reserve(horizon);
    }
    std::size_t next = 0;
    simulate(instance, kind, horizon, seed, optimum, options, [&](const RoundView& v) {
        if (next < checkpoints.size() && v.t == checkpoints[next]) {
            out.cumulative_at_checkpoints.push_back(v.cumulative_regret);
            ++next;
        }
        if (keep_traces) {
            out.trace.push_back(TraceRow{seed, v.t, v.arm, v.instant_regret, v.cumulative_regret});
        }
    });
    return out;
}

EnsembleResult merge(const BanditInstance& instance, const AgentKind& kind,
                     const std::vector<std::uint64_t>& checkpoints, std::vector<SeedOutcome>& outcomes,
                     bool keep_traces)
{
    for (auto& o : outcomes) {
        if (o.error) {
            std::rethrow_exception(o.error);
        }
    }
    EnsembleResult res;
    res.curve.agent = agent_label(kind);
    res.curve.instance_id = instance.id();
    const std::size_t s = outcomes.size();
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        double sum = 0.0;
        for (const auto& o : outcomes) {
            sum += o.cumulative_at_checkpoints[c];
        }
        const double mean = sum / static_cast<double>(s);
        double se = 0.0;
        if (s > 1) {
            double ss = 0.0;
            for (const auto& o : outcomes) {
                const double d = o.cumulative_at_checkpoints[c] - mean;
                ss += d * d;
            }
            se = std::sqrt(ss / static_cast<double>(s - 1)) / std::sqrt(static_cast<double>(s));
        }
        res.curve.points.push_back(CurvePoint{checkpoints[c], mean, se, s});
    }
    if (keep_traces) {
        for (auto& o : outcomes) {
            res.traces.insert(res.traces.end(), o.trace.begin(), o.trace.end());
        }
    }
    return res;
}

void check_seeds(std::span<const std::uint64_t> seeds)
{
    if (seeds.empty()) {
        throw ParameterError("at least one seed is required");
    }
}

} // namespace

EnsembleResult ensemble_regret_serial(const BanditInstance& instance, const AgentKind& kind, std::uint64_t horizon,
                                      std::span<const std::uint64_t> seeds, const OptimalPolicy& optimum,
                                      const EpisodeOptions& options, bool keep_traces)
{
    check_seeds(seeds);
    const auto checkpoints = geometric_checkpoints(horizon);
    std::vector<SeedOutcome> outcomes;
    outcomes.reserve(seeds.size());
    for (std::uint64_t seed : seeds) {
        outcomes.push_back(run_seed(instance, kind, horizon, seed, optimum, options, checkpoints, keep_traces));
    }
    return merge(instance, kind, checkpoints, outcomes, keep_traces);
}

EnsembleResult ensemble_regret(const BanditInstance& instance, const AgentKind& kind, std::uint64_t horizon,
                               std::span<const std::uint64_t> seeds, const OptimalPolicy& optimum,
                               const EpisodeOptions& options, bool keep_traces)
{
    check_seeds(seeds);
    const auto checkpoints = geometric_checkpoints(horizon);
    std::vector<SeedOutcome> outcomes(seeds.size());
    const auto count = static_cast<std::ptrdiff_t>(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t idx = 0; idx < count; ++idx) {
        try {
            outcomes[idx] = run_seed(instance, kind, horizon, seeds[idx], optimum, options, checkpoints, keep_traces);
        } catch (...) {
            outcomes[idx].error = std::current_exception();
        }
    }
    return merge(instance, kind, checkpoints, outcomes, keep_traces);
}

EnsembleResult ensemble_regret(const BanditInstance& instance, const AgentKind& kind, std::uint64_t horizon,
                               std::span<const std::uint64_t> seeds, const EpisodeOptions& options,
                               bool keep_traces)
{
    return ensemble_regret(instance, kind, horizon, seeds, optimal_nsw(instance), options, keep_traces);
}

double fit_regret_slope(const RegretCurve& curve, std::uint64_t t_min, std::uint64_t t_max)
{
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& p : curve.points) {
        if (p.t >= t_min && p.t <= t_max && p.mean_cum_regret > 0.0) {
            xs.push_back(std::log(static_cast<double>(p.t)));
            ys.push_back(std::log(p.mean_cum_regret));
        }
    }
    if (xs.size() < 3) {
        throw AnalysisError("slope fit needs >= 3 checkpoints with positive regret in [" + std::to_string(t_min)
                            + ", " + std::to_string(t_max) + "], found " + std::to_string(xs.size()));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

CleanEventReport validate_clean_event(const BanditInstance& instance, const AgentKind& kind, std::uint64_t horizon,
                                      std::span<const std::uint64_t> seeds,
                                      std::span<const std::uint64_t> checkpoints, const EpisodeOptions& options,
                                      double radius_scale)
{
    check_seeds(seeds);
    std::vector<std::uint64_t> cps(checkpoints.begin(), checkpoints.end());
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    if (cps.empty() || cps.front() < 1 || cps.back() > horizon) {
        throw ParameterError("clean-event checkpoints must lie in [1, T]");
    }
    const OptimalPolicy optimum = optimal_nsw(instance);
    const RewardMatrix& mu = instance.true_means();
    const std::size_t n = instance.agents();
    const std::size_t k = instance.arms();
    const std::uint64_t last = cps.back();

    // hit[s][c] = 1 when the event holds for seed s at checkpoint c.
    std::vector<std::vector<char>> hit(seeds.size(), std::vector<char>(cps.size(), 0));
    std::vector<std::exception_ptr> errors(seeds.size());
    const auto count = static_cast<std::ptrdiff_t>(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t s = 0; s < count; ++s) {
        try {
            std::size_t next = 0;
            simulate(instance, kind, last, seeds[s], optimum, options, [&](const RoundView& v) {
                if (next >= cps.size() || v.t != cps[next]) {
                    return;
                }
                const auto radii = UcbAgent::radii(v.estimator, radius_scale);
                bool clean = true;
                for (std::size_t i = 0; i < n && clean; ++i) {
                    for (std::size_t j = 0; j < k; ++j) {
                        if (std::abs(v.estimator.mean(i, j) - mu(i, j)) > radii[j]) {
                            clean = false;
                            break;
                        }
                    }
                }
                hit[s][next] = clean ? 1 : 0;
                ++next;
            });
        } catch (...) {
            errors[s] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    CleanEventReport report;
    for (std::size_t c = 0; c < cps.size(); ++c) {
        std::size_t satisfied = 0;
        for (const auto& row : hit) {
            satisfied += static_cast<std::size_t>(row[c]);
        }
        const double t = static_cast<double>(cps[c]);
        report.rows.push_back(CleanEventRow{cps[c], satisfied, seeds.size(),
                                            static_cast<double>(satisfied) / static_cast<double>(seeds.size()),
                                            1.0 - 2.0 / (t * t * t)});
    }
    return report;
}

std::vector<std::uint64_t> seed_range(std::uint64_t base, std::size_t count)
{
    std::vector<std::uint64_t> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = base + i;
    }
    return out;
}

} // namespace nswbandit
