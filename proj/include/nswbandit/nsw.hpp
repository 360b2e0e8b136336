#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nswbandit/policy.hpp"
#include "nswbandit/rng.hpp"

namespace nswbandit {

inline constexpr double kDefaultUtilityFloor = 1e-12;

// Expected reward of agent i (0-based) under p: sum_j p_j * mu(i, j).
double agent_utility(const Policy& p, const RewardMatrix& mu, std::size_t agent);

// Nash social welfare: product over agents of their expected rewards. In [0, 1].
double nsw_eval(const Policy& p, const RewardMatrix& mu);

// sum_i log(max(u_i, floor)). Strictly increasing in nsw_eval while every u_i > floor.
double log_nsw_eval(const Policy& p, const RewardMatrix& mu, double floor = kDefaultUtilityFloor);

double l1_distance(const Policy& a, const Policy& b);

// Uniform draw from the simplex via normalized unit-rate exponentials.
Policy sample_uniform_simplex(std::size_t arms, RngStream& rng);

namespace detail {

// Unchecked kernels on raw weight vectors; callers guarantee the shapes.
void utilities(std::span<const double> p, const RewardMatrix& mu, std::span<double> out) noexcept;
double nsw_raw(std::span<const double> p, const RewardMatrix& mu) noexcept;

} // namespace detail

/// Finite L1 cover of the simplex built from the composition grid.
class DeltaCover {
public:
    DeltaCover(std::size_t arms, double delta, std::size_t resolution, std::vector<Policy> points);

    std::size_t arms() const noexcept { return arms_; }
    double delta() const noexcept { return delta_; }
    // Grid step is 1 / resolution.
    std::size_t resolution() const noexcept { return resolution_; }
    const std::vector<Policy>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }

    // (1 + 2/delta)^K.
    double size_bound() const;
    // Minimum L1 distance from p to any cover point (exhaustive scan).
    double distance_to(const Policy& p) const;

private:
    std::size_t arms_;
    double delta_;
    std::size_t resolution_;
    std::vector<Policy> points_;
};

// All K-tuples of multiples of 1/R summing to one, with R = ceil(K / delta).
// Throws ParameterError unless 0 < delta <= 2.
DeltaCover make_delta_cover(std::size_t arms, double delta);

// Enumerates every composition of `total` into `parts` nonnegative integers in
// descending lexicographic order, calling visit(std::span<const std::size_t>) for each.
template <typename Visit>
void for_each_composition(std::size_t total, std::size_t parts, Visit&& visit);

// C(total + parts - 1, parts - 1).
std::size_t composition_count(std::size_t total, std::size_t parts);

template <typename Visit>
void for_each_composition(std::size_t total, std::size_t parts, Visit&& visit)
{
    if (parts == 0) {
        return;
    }
    std::vector<std::size_t> c(parts, 0);
    c[0] = total;
    for (;;) {
        visit(std::span<const std::size_t>(c));
        // Take one unit from the rightmost nonzero slot left of the tail and
        // move it, together with the whole tail, one slot to its right.
        if (c[parts - 1] == total) {
            return;
        }
        std::size_t k = parts - 1;
        std::size_t tail = c[k];
        c[k] = 0;
        do {
            --k;
        } while (c[k] == 0);
        c[k] -= 1;
        c[k + 1] = tail + 1;
    }
}

} // namespace nswbandit
