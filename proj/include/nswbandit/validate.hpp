#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nswbandit/bandit_env.hpp"

namespace nswbandit {

struct SuiteResult {
    std::string name;
    bool passed = true;
    // One-line human summary (sizes, worst margins, frequencies).
    std::string detail;
    // First failing sample, empty on success.
    std::string counterexample;
};

struct ValidateOptions {
    std::uint64_t seed = 0;
    std::size_t lipschitz_samples = 10000;
    std::size_t max_agents = 10;
    std::size_t max_arms = 10;

    std::vector<std::size_t> cover_arms{2, 3};
    std::vector<double> cover_deltas{0.5, 0.25};
    std::size_t cover_samples = 10000;

    std::size_t oracle_instances = 100;

    // Clean-event suite: UCB mode A on the benchmark instance unless overridden.
    std::optional<BanditInstance> clean_instance;
    std::size_t clean_seeds = 500;
    std::vector<std::uint64_t> clean_checkpoints{10, 100, 1000};
    double clean_slack = 0.05;
    // Multiplies every confidence radius; anything below 1 is a deliberate fault.
    double radius_scale = 1.0;
};

// Suite names accepted by run_validation's filter.
const std::vector<std::string>& validation_suite_names();

SuiteResult suite_product_difference(const ValidateOptions& opt);
SuiteResult suite_lipschitz_policy(const ValidateOptions& opt);
SuiteResult suite_lipschitz_means(const ValidateOptions& opt);
SuiteResult suite_nsw_range(const ValidateOptions& opt);
SuiteResult suite_cover(const ValidateOptions& opt);
SuiteResult suite_oracle_nsw(const ValidateOptions& opt);
SuiteResult suite_oracle_ucb(const ValidateOptions& opt);
SuiteResult suite_clean_event(const ValidateOptions& opt);

// Runs the named suites (all when `only` is empty) in the fixed order above.
// Throws ParameterError on an unknown suite name.
std::vector<SuiteResult> run_validation(const ValidateOptions& opt, const std::vector<std::string>& only = {});

} // namespace nswbandit
