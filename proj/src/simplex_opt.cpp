#include "nswbandit/simplex_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "nswbandit/errors.hpp"
#include "nswbandit/rng.hpp"

namespace nswbandit {

void OptimizerConfig::validate() const
{
    if (max_iterations < 1) {
        throw ParameterError("optimizer max_iterations must be >= 1");
    }
    if (!(step_init > 0.0) || !std::isfinite(step_init)) {
        throw ParameterError("optimizer step_init must be positive");
    }
    if (!(tolerance > 0.0)) {
        throw ParameterError("optimizer tolerance must be positive");
    }
    if (restarts < 1) {
        throw ParameterError("optimizer restarts must be >= 1");
    }
    if (!(utility_floor > 0.0)) {
        throw ParameterError("optimizer utility_floor must be positive");
    }
}

OptimizerConfig OptimizerConfig::validation_grade()
{
    OptimizerConfig cfg;
    cfg.restarts = 32;
    cfg.tolerance = 1e-12;
    cfg.max_iterations = 20000;
    return cfg;
}

void project_to_simplex(std::span<const double> v, std::span<double> out)
{
    const std::size_t k = v.size();
    // Small K in practice; a stack buffer would do, but K is unbounded in the API.
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        cumulative += sorted[i];
        const double t = (cumulative - 1.0) / static_cast<double>(i + 1);
        if (sorted[i] - t > 0.0) {
            theta = t;
        }
    }
    for (std::size_t j = 0; j < k; ++j) {
        out[j] = std::max(v[j] - theta, 0.0);
    }
}

std::vector<double> project_to_simplex(std::span<const double> v)
{
    std::vector<double> out(v.size());
    project_to_simplex(v, out);
    return out;
}

void log_nsw_gradient(std::span<const double> p, const RewardMatrix& mu, double floor, std::span<double> grad)
{
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < mu.agents(); ++i) {
        const auto row = mu.row(i);
        double u = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) {
            u += p[j] * row[j];
        }
        const double inv = 1.0 / std::max(u, floor);
        for (std::size_t j = 0; j < p.size(); ++j) {
            grad[j] += row[j] * inv;
        }
    }
}

void ucb_objective_gradient(std::span<const double> p, const RewardMatrix& mu, std::span<const double> radii,
                            double alpha, std::span<double> grad)
{
    const std::size_t n = mu.agents();
    std::vector<double> u(n);
    detail::utilities(p, mu, u);
    // prod_{k != i} u_k via prefix/suffix products, exact when some u_k == 0.
    std::vector<double> others(n, 1.0);
    double prefix = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        others[i] = prefix;
        prefix *= u[i];
    }
    double suffix = 1.0;
    for (std::size_t i = n; i-- > 0;) {
        others[i] *= suffix;
        suffix *= u[i];
    }
    for (std::size_t j = 0; j < p.size(); ++j) {
        double g = alpha * radii[j];
        for (std::size_t i = 0; i < n; ++i) {
            g += mu(i, j) * others[i];
        }
        grad[j] = g;
    }
}

double ucb_objective(const Policy& p, const RewardMatrix& mu, std::span<const double> radii, double alpha)
{
    if (radii.size() != mu.arms()) {
        throw DimensionError("radii length differs from arm count");
    }
    double bonus = 0.0;
    for (std::size_t j = 0; j < p.arms(); ++j) {
        bonus += p[j] * radii[j];
    }
    return nsw_eval(p, mu) + alpha * bonus;
}

namespace {

struct AscentOutcome {
    std::vector<double> x;
    int iterations = 0;
    bool converged = false;
};

constexpr int kMaxHalvings = 64;
constexpr double kMaxStepGrowth = 1e12;

// Projected gradient ascent with backtracking: each iteration starts from twice
// the last accepted step and halves until the objective strictly improves.
template <typename Objective, typename Gradient>
AscentOutcome projected_ascent(Objective&& f, Gradient&& grad, std::vector<double> x, const OptimizerConfig& cfg,
                               std::vector<double>* trace)
{
    const std::size_t k = x.size();
    std::vector<double> g(k), trial(k), y(k);
    double fx = f(x);
    if (trace) {
        trace->push_back(fx);
    }
    double step = cfg.step_init;
    const double max_step = cfg.step_init * kMaxStepGrowth;

    AscentOutcome out;
    for (int it = 0; it < cfg.max_iterations; ++it) {
        grad(x, g);
        bool improved = false;
        double fy = fx;
        for (int h = 0; h < kMaxHalvings; ++h) {
            for (std::size_t j = 0; j < k; ++j) {
                trial[j] = x[j] + step * g[j];
            }
            project_to_simplex(trial, y);
            if (std::equal(x.begin(), x.end(), y.begin())) {
                break; // fixed point of the projected step
            }
            fy = f(y);
            if (fy > fx) {
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) {
            out.converged = true;
            break;
        }
        const double gain = fy - fx;
        x.swap(y);
        fx = fy;
        ++out.iterations;
        if (trace) {
            trace->push_back(fx);
        }
        if (gain < cfg.tolerance) {
            out.converged = true;
            break;
        }
        step = std::min(step * 2.0, max_step);
    }
    out.x = std::move(x);
    return out;
}

bool has_zero_row(const RewardMatrix& mu)
{
    for (std::size_t i = 0; i < mu.agents(); ++i) {
        const auto row = mu.row(i);
        if (std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; })) {
            return true;
        }
    }
    return false;
}

AscentOutcome ascend_log_nsw(const RewardMatrix& mu, std::vector<double> start, const OptimizerConfig& cfg,
                             std::vector<double>* trace)
{
    const double floor = cfg.utility_floor;
    std::vector<double> u(mu.agents());
    auto f = [&](std::span<const double> p) {
        detail::utilities(p, mu, u);
        double total = 0.0;
        for (double ui : u) {
            total += std::log(std::max(ui, floor));
        }
        return total;
    };
    auto grad = [&](std::span<const double> p, std::span<double> g) { log_nsw_gradient(p, mu, floor, g); };
    return projected_ascent(f, grad, std::move(start), cfg, trace);
}

} // namespace

OptResult maximize_nsw_from(const RewardMatrix& mu, const Policy& start, const OptimizerConfig& cfg)
{
    cfg.validate();
    if (start.arms() != mu.arms()) {
        throw DimensionError("start policy arm count differs from reward matrix");
    }
    if (has_zero_row(mu)) {
        OptResult r{Policy::uniform(mu.arms())};
        r.objective_value = 0.0;
        r.converged = true;
        if (cfg.record_trace) {
            r.traces.push_back({0.0});
        }
        return r;
    }
    std::vector<double> trace;
    AscentOutcome a = ascend_log_nsw(mu, {start.weights().begin(), start.weights().end()}, cfg,
                                     cfg.record_trace ? &trace : nullptr);
    OptResult r{Policy(std::move(a.x))};
    r.objective_value = nsw_eval(r.policy, mu);
    r.iterations_used = a.iterations;
    r.converged = a.converged;
    if (cfg.record_trace) {
        r.traces.push_back(std::move(trace));
    }
    return r;
}

OptResult maximize_nsw(const RewardMatrix& mu, const OptimizerConfig& cfg)
{
    return maximize_nsw_from(mu, Policy::uniform(mu.arms()), cfg);
}

OptResult maximize_ucb_objective(const RewardMatrix& mu, std::span<const double> radii, double alpha,
                                 const OptimizerConfig& cfg)
{
    cfg.validate();
    const std::size_t k = mu.arms();
    if (radii.size() != k) {
        throw DimensionError("radii has " + std::to_string(radii.size()) + " entries, expected "
                             + std::to_string(k));
    }
    for (double r : radii) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
            throw ParameterError("confidence radii must be finite and nonnegative");
        }
    }
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw ParameterError("alpha must be finite and nonnegative");
    }

    std::vector<std::vector<double>> starts;
    starts.reserve(k + 2);
    starts.emplace_back(k, 1.0 / static_cast<double>(k));
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<double> v(k, 0.0);
        v[j] = 1.0;
        starts.push_back(std::move(v));
    }
    {
        OptimizerConfig inner = cfg;
        inner.record_trace = false;
        const OptResult nsw = maximize_nsw(mu, inner);
        starts.emplace_back(nsw.policy.weights().begin(), nsw.policy.weights().end());
    }
    const int random_starts = cfg.restarts - static_cast<int>(k) - 2;
    if (random_starts > 0) {
        RngStream rng(0, "ucb-restarts");
        for (int s = 0; s < random_starts; ++s) {
            const Policy p = sample_uniform_simplex(k, rng);
            starts.emplace_back(p.weights().begin(), p.weights().end());
        }
    }

    std::vector<double> u(mu.agents());
    auto f = [&](std::span<const double> p) {
        detail::utilities(p, mu, u);
        double value = 1.0;
        for (double ui : u) {
            value *= ui;
        }
        for (std::size_t j = 0; j < k; ++j) {
            value += alpha * p[j] * radii[j];
        }
        return value;
    };
    auto grad = [&](std::span<const double> p, std::span<double> g) {
        ucb_objective_gradient(p, mu, radii, alpha, g);
    };

    OptResult best{Policy::uniform(k)};
    best.objective_value = -std::numeric_limits<double>::infinity();
    int total_iterations = 0;
    for (auto& start : starts) {
        std::vector<double> trace;
        AscentOutcome a = projected_ascent(f, grad, std::move(start), cfg, cfg.record_trace ? &trace : nullptr);
        total_iterations += a.iterations;
        Policy candidate(std::move(a.x));
        const double value = ucb_objective(candidate, mu, radii, alpha);
        if (cfg.record_trace) {
            best.traces.push_back(std::move(trace));
        }
        if (value > best.objective_value) {
            best.policy = std::move(candidate);
            best.objective_value = value;
            best.converged = a.converged;
        }
    }
    best.iterations_used = total_iterations;
    return best;
}

namespace {

void check_brute_force_args(std::size_t arms, std::size_t resolution)
{
    if (arms == 0 || arms > kBruteForceMaxArms) {
        throw ParameterError("brute force search supports 1 <= K <= " + std::to_string(kBruteForceMaxArms));
    }
    if (resolution == 0) {
        throw ParameterError("brute force resolution must be >= 1");
    }
}

Policy grid_policy(std::span<const std::size_t> c, std::size_t resolution)
{
    std::vector<double> w(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        w[j] = static_cast<double>(c[j]) / static_cast<double>(resolution);
    }
    return Policy(std::move(w));
}

} // namespace

OptResult brute_force_maximize_serial(const PolicyObjective& objective, std::size_t arms, std::size_t resolution)
{
    check_brute_force_args(arms, resolution);
    OptResult best{Policy::uniform(arms)};
    best.objective_value = -std::numeric_limits<double>::infinity();
    best.converged = true;
    int evaluated = 0;
    for_each_composition(resolution, arms, [&](std::span<const std::size_t> c) {
        Policy p = grid_policy(c, resolution);
        const double v = objective(p);
        if (evaluated++ == 0 || v > best.objective_value) {
            best.objective_value = v;
            best.policy = std::move(p);
        }
    });
    best.iterations_used = evaluated;
    return best;
}

OptResult brute_force_maximize(const PolicyObjective& objective, std::size_t arms, std::size_t resolution)
{
    check_brute_force_args(arms, resolution);
    const std::size_t count = composition_count(resolution, arms);
    std::vector<std::size_t> grid;
    grid.reserve(count * arms);
    for_each_composition(resolution, arms,
                         [&](std::span<const std::size_t> c) { grid.insert(grid.end(), c.begin(), c.end()); });

    const auto n = static_cast<std::ptrdiff_t>(count);
    double best_value = -std::numeric_limits<double>::infinity();
    std::ptrdiff_t best_index = n;
#pragma omp parallel
    {
        double local_value = -std::numeric_limits<double>::infinity();
        std::ptrdiff_t local_index = n;
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t idx = 0; idx < n; ++idx) {
            const std::span<const std::size_t> c(grid.data() + idx * static_cast<std::ptrdiff_t>(arms), arms);
            const double v = objective(grid_policy(c, resolution));
            if (v > local_value) {
                local_value = v;
                local_index = idx;
            }
        }
#pragma omp critical(nswbandit_brute_force)
        {
            if (local_value > best_value || (local_value == best_value && local_index < best_index)) {
                best_value = local_value;
                best_index = local_index;
            }
        }
    }

    if (best_index == n) {
        // Every evaluation was NaN or -inf; fall back to the first grid point like the serial path.
        best_index = 0;
    }
    const std::span<const std::size_t> c(grid.data() + best_index * static_cast<std::ptrdiff_t>(arms), arms);
    OptResult r{grid_policy(c, resolution)};
    r.objective_value = objective(r.policy);
    r.iterations_used = static_cast<int>(count);
    r.converged = true;
    return r;
}

} // namespace nswbandit
