#include "nswbandit/policy.hpp"

#include <cmath>
#include <string>

#include "nswbandit/errors.hpp"

namespace nswbandit {

Policy::Policy(std::vector<double> weights)
    : weights_(std::move(weights))
{
    if (weights_.empty()) {
        throw ParameterError("policy needs at least one arm");
    }
    double sum = 0.0;
    for (double& w : weights_) {
        if (!std::isfinite(w)) {
            throw ParameterError("policy weight is not finite");
        }
        if (w < 0.0) {
            if (w < -kNegativeSlack) {
                throw ParameterError("policy weight " + std::to_string(w) + " is negative");
            }
            w = 0.0;
        }
        sum += w;
    }
    if (sum < kMinSum) {
        throw ParameterError("policy weights sum to (nearly) zero");
    }
    for (double& w : weights_) {
        w /= sum;
    }
}

Policy Policy::uniform(std::size_t arms)
{
    if (arms == 0) {
        throw ParameterError("policy needs at least one arm");
    }
    return Policy(std::vector<double>(arms, 1.0));
}

Policy Policy::vertex(std::size_t arms, std::size_t arm)
{
    if (arm >= arms) {
        throw IndexError("arm " + std::to_string(arm) + " out of range for K=" + std::to_string(arms));
    }
    std::vector<double> w(arms, 0.0);
    w[arm] = 1.0;
    return Policy(std::move(w));
}

double Policy::at(std::size_t j) const
{
    if (j >= weights_.size()) {
        throw IndexError("arm " + std::to_string(j) + " out of range");
    }
    return weights_[j];
}

RewardMatrix::RewardMatrix(std::size_t agents, std::size_t arms, std::vector<double> row_major)
    : agents_(agents)
    , arms_(arms)
    , values_(std::move(row_major))
{
    if (agents_ == 0 || arms_ == 0) {
        throw ParameterError("reward matrix needs N >= 1 and K >= 1");
    }
    if (values_.size() != agents_ * arms_) {
        throw DimensionError("reward matrix has " + std::to_string(values_.size())
                             + " entries, expected " + std::to_string(agents_ * arms_));
    }
    for (double v : values_) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ParameterError("reward mean " + std::to_string(v) + " outside [0,1]");
        }
    }
}

RewardMatrix::RewardMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : RewardMatrix(from_rows(std::vector<std::vector<double>>(rows.begin(), rows.end())))
{
}

RewardMatrix RewardMatrix::from_rows(const std::vector<std::vector<double>>& rows)
{
    if (rows.empty() || rows.front().empty()) {
        throw ParameterError("reward matrix needs N >= 1 and K >= 1");
    }
    const std::size_t arms = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * arms);
    for (const auto& r : rows) {
        if (r.size() != arms) {
            throw DimensionError("ragged reward matrix");
        }
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return RewardMatrix(rows.size(), arms, std::move(flat));
}

RewardMatrix RewardMatrix::zeros(std::size_t agents, std::size_t arms)
{
    return RewardMatrix(agents, arms, std::vector<double>(agents * arms, 0.0));
}

double RewardMatrix::at(std::size_t i, std::size_t j) const
{
    if (i >= agents_ || j >= arms_) {
        throw IndexError("reward matrix index (" + std::to_string(i) + "," + std::to_string(j)
                         + ") out of range");
    }
    return (*this)(i, j);
}

} // namespace nswbandit
