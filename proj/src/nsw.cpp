#include "nswbandit/nsw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nswbandit/errors.hpp"

namespace nswbandit {

namespace {

void require_same_arms(const Policy& p, const RewardMatrix& mu)
{
    if (p.arms() != mu.arms()) {
        throw DimensionError("policy has " + std::to_string(p.arms()) + " arms, reward matrix has "
                             + std::to_string(mu.arms()));
    }
}

double row_dot(std::span<const double> p, std::span<const double> row) noexcept
{
    double u = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        u += p[j] * row[j];
    }
    return u;
}

} // namespace

namespace detail {

void utilities(std::span<const double> p, const RewardMatrix& mu, std::span<double> out) noexcept
{
    for (std::size_t i = 0; i < mu.agents(); ++i) {
        out[i] = row_dot(p, mu.row(i));
    }
}

double nsw_raw(std::span<const double> p, const RewardMatrix& mu) noexcept
{
    double prod = 1.0;
    for (std::size_t i = 0; i < mu.agents(); ++i) {
        prod *= row_dot(p, mu.row(i));
    }
    return prod;
}

} // namespace detail

double agent_utility(const Policy& p, const RewardMatrix& mu, std::size_t agent)
{
    require_same_arms(p, mu);
    if (agent >= mu.agents()) {
        throw IndexError("agent " + std::to_string(agent) + " out of range for N="
                         + std::to_string(mu.agents()));
    }
    return row_dot(p.weights(), mu.row(agent));
}

double nsw_eval(const Policy& p, const RewardMatrix& mu)
{
    require_same_arms(p, mu);
    // Rounding in the dot products can overshoot 1 by an ulp.
    return std::clamp(detail::nsw_raw(p.weights(), mu), 0.0, 1.0);
}

double log_nsw_eval(const Policy& p, const RewardMatrix& mu, double floor)
{
    require_same_arms(p, mu);
    if (!(floor > 0.0)) {
        throw ParameterError("utility floor must be positive");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < mu.agents(); ++i) {
        total += std::log(std::max(row_dot(p.weights(), mu.row(i)), floor));
    }
    return total;
}

double l1_distance(const Policy& a, const Policy& b)
{
    if (a.arms() != b.arms()) {
        throw DimensionError("policies have different arm counts");
    }
    double d = 0.0;
    for (std::size_t j = 0; j < a.arms(); ++j) {
        d += std::abs(a[j] - b[j]);
    }
    return d;
}

Policy sample_uniform_simplex(std::size_t arms, RngStream& rng)
{
    if (arms == 0) {
        throw ParameterError("simplex needs at least one arm");
    }
    std::vector<double> w(arms);
    for (double& x : w) {
        x = rng.exponential();
    }
    return Policy(std::move(w));
}

std::size_t composition_count(std::size_t total, std::size_t parts)
{
    if (parts == 0) {
        return 0;
    }
    // C(total + parts - 1, parts - 1), built incrementally to stay exact.
    std::size_t n = total + parts - 1;
    std::size_t k = std::min(parts - 1, total);
    std::size_t result = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
    }
    return result;
}

DeltaCover::DeltaCover(std::size_t arms, double delta, std::size_t resolution, std::vector<Policy> points)
    : arms_(arms)
    , delta_(delta)
    , resolution_(resolution)
    , points_(std::move(points))
{
}

double DeltaCover::size_bound() const
{
    return std::pow(1.0 + 2.0 / delta_, static_cast<double>(arms_));
}

double DeltaCover::distance_to(const Policy& p) const
{
    double best = std::numeric_limits<double>::infinity();
    for (const Policy& s : points_) {
        best = std::min(best, l1_distance(p, s));
    }
    return best;
}

DeltaCover make_delta_cover(std::size_t arms, double delta)
{
    if (arms == 0) {
        throw ParameterError("cover needs K >= 1");
    }
    if (!(delta > 0.0) || delta > 2.0) {
        throw ParameterError("cover radius delta must lie in (0, 2]");
    }
    const auto resolution = static_cast<std::size_t>(std::ceil(static_cast<double>(arms) / delta));
    const double bound = std::pow(1.0 + 2.0 / delta, static_cast<double>(arms));
    const std::size_t count = composition_count(resolution, arms);
    if (static_cast<double>(count) > bound) {
        throw InvariantError("grid cover with " + std::to_string(count) + " points exceeds the size bound "
                             + std::to_string(bound));
    }

    std::vector<Policy> points;
    points.reserve(count);
    const double step = 1.0 / static_cast<double>(resolution);
    std::vector<double> w(arms);
    for_each_composition(resolution, arms, [&](std::span<const std::size_t> c) {
        for (std::size_t j = 0; j < arms; ++j) {
            w[j] = static_cast<double>(c[j]) * step;
        }
        points.emplace_back(w);
    });
    return DeltaCover(arms, delta, resolution, std::move(points));
}

} // namespace nswbandit
