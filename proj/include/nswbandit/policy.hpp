#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nswbandit {

/// A probability distribution over K arms, i.e. a point on the simplex.
///
/// Construction is the single normalization boundary: inputs are divided by
/// their sum, tiny negatives (>= -1e-12) are clamped to zero, anything more
/// negative, non-finite, or summing below 1e-12 is rejected with ParameterError.
/// After construction every weight is >= 0 and the weights sum to 1 within 1e-9.
class Policy {
public:
    static constexpr double kNegativeSlack = 1e-12;
    static constexpr double kMinSum = 1e-12;

    explicit Policy(std::vector<double> weights);

    static Policy uniform(std::size_t arms);
    // Point mass on `arm` (0-based).
    static Policy vertex(std::size_t arms, std::size_t arm);

    std::size_t arms() const noexcept { return weights_.size(); }
    double operator[](std::size_t j) const noexcept { return weights_[j]; }
    double at(std::size_t j) const;
    std::span<const double> weights() const noexcept { return weights_; }

    friend bool operator==(const Policy&, const Policy&) = default;

private:
    std::vector<double> weights_;
};

/// N x K matrix of mean rewards, every entry in [0, 1]. Row-major.
class RewardMatrix {
public:
    RewardMatrix(std::size_t agents, std::size_t arms, std::vector<double> row_major);
    RewardMatrix(std::initializer_list<std::initializer_list<double>> rows);
    static RewardMatrix from_rows(const std::vector<std::vector<double>>& rows);
    static RewardMatrix zeros(std::size_t agents, std::size_t arms);

    std::size_t agents() const noexcept { return agents_; }
    std::size_t arms() const noexcept { return arms_; }

    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * arms_ + j]; }
    double at(std::size_t i, std::size_t j) const;
    std::span<const double> row(std::size_t i) const noexcept
    {
        return {values_.data() + i * arms_, arms_};
    }
    std::span<const double> values() const noexcept { return values_; }

    friend bool operator==(const RewardMatrix&, const RewardMatrix&) = default;

private:
    std::size_t agents_;
    std::size_t arms_;
    std::vector<double> values_;
};

} // namespace nswbandit
