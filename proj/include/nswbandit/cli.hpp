#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nswbandit/algorithms.hpp"
#include "nswbandit/bandit_env.hpp"
#include "nswbandit/simplex_opt.hpp"
#include "nswbandit/validate.hpp"

namespace nswbandit::cli {

enum ExitCode : int { kSuccess = 0, kRuntimeFailure = 1, kConfigError = 2 };

// Bad or missing configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AlgoChoice {
    std::string name; // explorefirst | epsgreedy | ucb
    ScheduleMode mode = ScheduleMode::A;
};

// "ucb", "ucb:b", "epsgreedy:a", ... Throws ConfigError.
AlgoChoice parse_algo_choice(const std::string& token);
std::string algo_choice_label(const AlgoChoice& a);

struct ExperimentConfig {
    // Exactly one source once resolved; a path is relative to the working directory.
    std::optional<std::filesystem::path> instance_path;
    std::optional<std::string> instance_json;

    AlgoChoice algo{"ucb", ScheduleMode::A};
    std::vector<AlgoChoice> algorithms;
    std::uint64_t horizon = 1000;
    std::vector<std::uint64_t> seeds{0};
    OptimizerConfig optimizer = in_loop_optimizer_config();
    std::optional<std::uint64_t> explore_length;
    ScheduleConstants constants;
    std::filesystem::path out_dir = "out";
    bool emit_traces = false;

    ValidateOptions validate;
    std::vector<std::string> suites;

    // Throws ConfigError naming the offending field.
    void check() const;
};

/// Reads a JSON experiment config. Keys: instance (path relative to the
/// config file, or an inline instance object), algo, mode, algorithms,
/// horizon, seeds (count), base_seed, seed_list, optimizer {max_iterations,
/// step_init, tolerance, restarts}, explore_length, schedule_constants
/// {explore_first, epsilon}, out, emit_traces, validate {...}.
ExperimentConfig load_config(const std::filesystem::path& path);

BanditInstance resolve_instance(const ExperimentConfig& cfg);

AgentKind make_agent_kind(const AlgoChoice& choice, const BanditInstance& instance, const ExperimentConfig& cfg);

// Canonical JSON of everything that determines the numbers (not output paths).
std::string canonical_config(const ExperimentConfig& cfg, const BanditInstance& instance,
                             const std::vector<AlgoChoice>& algos);

// Entry point for the `nswbandit` executable; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace nswbandit::cli
