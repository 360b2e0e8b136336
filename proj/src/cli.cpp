#include "nswbandit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "nswbandit/errors.hpp"
#include "nswbandit/export.hpp"
#include "nswbandit/harness.hpp"

namespace nswbandit::cli {

using nlohmann::json;

AlgoChoice parse_algo_choice(const std::string& token)
{
    AlgoChoice c;
    std::string name = token;
    if (const auto colon = token.find(':'); colon != std::string::npos) {
        name = token.substr(0, colon);
        const std::string mode = token.substr(colon + 1);
        if (mode == "a" || mode == "A") {
            c.mode = ScheduleMode::A;
        } else if (mode == "b" || mode == "B") {
            c.mode = ScheduleMode::B;
        } else {
            throw ConfigError("mode: expected a or b, got \"" + mode + "\"");
        }
    }
    if (name != "explorefirst" && name != "epsgreedy" && name != "ucb") {
        throw ConfigError("algo: expected explorefirst, epsgreedy or ucb, got \"" + name + "\"");
    }
    c.name = name;
    return c;
}

std::string algo_choice_label(const AlgoChoice& a)
{
    return a.name + "-" + (a.mode == ScheduleMode::A ? "a" : "b");
}

void ExperimentConfig::check() const
{
    if (horizon < 1) {
        throw ConfigError("horizon: must be >= 1");
    }
    if (seeds.empty()) {
        throw ConfigError("seeds: at least one seed is required");
    }
    try {
        optimizer.validate();
    } catch (const ParameterError& e) {
        throw ConfigError(std::string("optimizer: ") + e.what());
    }
    if (explore_length && *explore_length < 1) {
        throw ConfigError("explore_length: must be >= 1");
    }
    if (!(constants.explore_first > 0.0) || !(constants.epsilon > 0.0)) {
        throw ConfigError("schedule_constants: must be positive");
    }
}

namespace {

ScheduleMode parse_mode(const std::string& m, const std::string& field)
{
    if (m == "a" || m == "A") {
        return ScheduleMode::A;
    }
    if (m == "b" || m == "B") {
        return ScheduleMode::B;
    }
    throw ConfigError(field + ": expected a or b, got \"" + m + "\"");
}

template <typename T>
T get_field(const json& doc, const std::string& key, const std::string& path)
{
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(path + key + ": wrong type");
    }
}

std::uint64_t get_count(const json& doc, const std::string& key, const std::string& path)
{
    const json& v = doc.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError(path + key + ": expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

void apply_optimizer_json(const json& o, OptimizerConfig& cfg)
{
    if (!o.is_object()) {
        throw ConfigError("optimizer: expected an object");
    }
    for (const auto& [key, value] : o.items()) {
        if (key == "max_iterations") {
            cfg.max_iterations = get_field<int>(o, key, "optimizer.");
        } else if (key == "step_init") {
            cfg.step_init = get_field<double>(o, key, "optimizer.");
        } else if (key == "tolerance") {
            cfg.tolerance = get_field<double>(o, key, "optimizer.");
        } else if (key == "restarts") {
            cfg.restarts = get_field<int>(o, key, "optimizer.");
        } else if (key == "utility_floor") {
            cfg.utility_floor = get_field<double>(o, key, "optimizer.");
        } else {
            throw ConfigError("optimizer." + key + ": unknown field");
        }
    }
}

void apply_validate_json(const json& v, ValidateOptions& opt, std::vector<std::string>& suites)
{
    if (!v.is_object()) {
        throw ConfigError("validate: expected an object");
    }
    const std::string p = "validate.";
    for (const auto& [key, value] : v.items()) {
        if (key == "seed") {
            opt.seed = get_count(v, key, p);
        } else if (key == "samples") {
            opt.lipschitz_samples = get_count(v, key, p);
        } else if (key == "cover_arms") {
            opt.cover_arms = get_field<std::vector<std::size_t>>(v, key, p);
        } else if (key == "cover_deltas") {
            opt.cover_deltas = get_field<std::vector<double>>(v, key, p);
        } else if (key == "cover_samples") {
            opt.cover_samples = get_count(v, key, p);
        } else if (key == "oracle_instances") {
            opt.oracle_instances = get_count(v, key, p);
        } else if (key == "clean_seeds") {
            opt.clean_seeds = get_count(v, key, p);
        } else if (key == "clean_checkpoints") {
            opt.clean_checkpoints = get_field<std::vector<std::uint64_t>>(v, key, p);
        } else if (key == "clean_slack") {
            opt.clean_slack = get_field<double>(v, key, p);
        } else if (key == "suites") {
            suites = get_field<std::vector<std::string>>(v, key, p);
        } else {
            throw ConfigError(p + key + ": unknown field");
        }
    }
}

} // namespace

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: malformed JSON in " + path.string() + ": " + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("config: expected a JSON object");
    }

    ExperimentConfig cfg;
    std::optional<std::uint64_t> base_seed;
    std::optional<std::uint64_t> seed_count;
    for (const auto& [key, value] : doc.items()) {
        if (key == "instance") {
            if (value.is_string()) {
                std::filesystem::path p = value.get<std::string>();
                if (p.is_relative()) {
                    p = path.parent_path() / p;
                }
                cfg.instance_path = p;
            } else if (value.is_object()) {
                cfg.instance_json = value.dump();
            } else {
                throw ConfigError("instance: expected a path or an inline object");
            }
        } else if (key == "algo") {
            cfg.algo.name = parse_algo_choice(get_field<std::string>(doc, key, "")).name;
        } else if (key == "mode") {
            cfg.algo.mode = parse_mode(get_field<std::string>(doc, key, ""), "mode");
        } else if (key == "algorithms") {
            cfg.algorithms.clear();
            for (const auto& tok : get_field<std::vector<std::string>>(doc, key, "")) {
                cfg.algorithms.push_back(parse_algo_choice(tok));
            }
        } else if (key == "horizon") {
            cfg.horizon = get_count(doc, key, "");
        } else if (key == "seeds") {
            seed_count = get_count(doc, key, "");
        } else if (key == "base_seed") {
            base_seed = get_count(doc, key, "");
        } else if (key == "seed_list") {
            cfg.seeds = get_field<std::vector<std::uint64_t>>(doc, key, "");
        } else if (key == "optimizer") {
            apply_optimizer_json(value, cfg.optimizer);
        } else if (key == "explore_length") {
            cfg.explore_length = get_count(doc, key, "");
        } else if (key == "schedule_constants") {
            if (!value.is_object()) {
                throw ConfigError("schedule_constants: expected an object");
            }
            for (const auto& [ck, cv] : value.items()) {
                if (ck == "explore_first") {
                    cfg.constants.explore_first = get_field<double>(value, ck, "schedule_constants.");
                } else if (ck == "epsilon") {
                    cfg.constants.epsilon = get_field<double>(value, ck, "schedule_constants.");
                } else {
                    throw ConfigError("schedule_constants." + ck + ": unknown field");
                }
            }
        } else if (key == "out") {
            cfg.out_dir = get_field<std::string>(doc, key, "");
        } else if (key == "emit_traces") {
            cfg.emit_traces = get_field<bool>(doc, key, "");
        } else if (key == "validate") {
            apply_validate_json(value, cfg.validate, cfg.suites);
        } else {
            throw ConfigError(key + ": unknown field");
        }
    }
    if (doc.contains("seed_list") && (seed_count || base_seed)) {
        throw ConfigError("seed_list: cannot be combined with seeds/base_seed");
    }
    if (seed_count || base_seed) {
        cfg.seeds = seed_range(base_seed.value_or(0), static_cast<std::size_t>(seed_count.value_or(1)));
    }
    return cfg;
}

BanditInstance resolve_instance(const ExperimentConfig& cfg)
{
    try {
        if (cfg.instance_json) {
            return parse_instance(*cfg.instance_json);
        }
        if (cfg.instance_path) {
            if (!std::filesystem::exists(*cfg.instance_path)) {
                throw ConfigError("instance: file not found: " + cfg.instance_path->string());
            }
            return load_instance(*cfg.instance_path);
        }
    } catch (const ParseError& e) {
        throw ConfigError(std::string("instance: ") + e.what());
    }
    throw ConfigError("instance: required (use --instance or the config's \"instance\" field)");
}

AgentKind make_agent_kind(const AlgoChoice& choice, const BanditInstance& instance, const ExperimentConfig& cfg)
{
    if (choice.name == "explorefirst") {
        if (cfg.horizon < instance.arms()) {
            throw ConfigError("horizon: explore-first needs T >= K");
        }
        const std::uint64_t l = cfg.explore_length
            ? *cfg.explore_length
            : explore_first_L(choice.mode, instance.agents(), instance.arms(), cfg.horizon,
                              cfg.constants.explore_first);
        if (l * instance.arms() > cfg.horizon) {
            throw ConfigError("explore_length: K*L exceeds the horizon");
        }
        return ExploreFirstSpec{cfg.horizon, l};
    }
    if (choice.name == "epsgreedy") {
        return EpsilonGreedySpec{choice.mode, cfg.constants.epsilon};
    }
    return UcbSpec{choice.mode};
}

std::string canonical_config(const ExperimentConfig& cfg, const BanditInstance& instance,
                             const std::vector<AlgoChoice>& algos)
{
    json doc;
    doc["instance"] = json::parse(instance_to_json(instance));
    json list = json::array();
    for (const auto& a : algos) {
        list.push_back(algo_choice_label(a));
    }
    doc["algorithms"] = list;
    doc["horizon"] = cfg.horizon;
    doc["seeds"] = cfg.seeds;
    doc["optimizer"] = {{"max_iterations", cfg.optimizer.max_iterations},
                        {"step_init", cfg.optimizer.step_init},
                        {"tolerance", cfg.optimizer.tolerance},
                        {"restarts", cfg.optimizer.restarts},
                        {"utility_floor", cfg.optimizer.utility_floor}};
    if (cfg.explore_length) {
        doc["explore_length"] = *cfg.explore_length;
    }
    doc["schedule_constants"] = {{"explore_first", cfg.constants.explore_first},
                                 {"epsilon", cfg.constants.epsilon}};
    return doc.dump();
}

namespace {

struct CliOptions {
    std::string config;
    std::string instance;
    std::string algo;
    std::string mode;
    std::vector<std::string> algos;
    std::uint64_t horizon = 0;
    std::uint64_t seeds = 0;
    std::uint64_t base_seed = 0;
    std::vector<std::uint64_t> seed_list;
    std::string out;
    bool emit_traces = false;
    std::uint64_t explore_length = 0;
    int restarts = 0;
    double tolerance = 0.0;
    int max_iterations = 0;

    std::vector<std::string> suites;
    std::size_t samples = 0;
    std::size_t clean_seeds = 0;
    std::vector<double> cover_deltas;
    std::vector<std::size_t> cover_arms;
    double fault_radius_scale = 1.0;
};

struct Registered {
    CLI::Option* config = nullptr;
    CLI::Option* instance = nullptr;
    CLI::Option* algo = nullptr;
    CLI::Option* mode = nullptr;
    CLI::Option* algos = nullptr;
    CLI::Option* horizon = nullptr;
    CLI::Option* seeds = nullptr;
    CLI::Option* base_seed = nullptr;
    CLI::Option* seed_list = nullptr;
    CLI::Option* out = nullptr;
    CLI::Option* emit_traces = nullptr;
    CLI::Option* explore_length = nullptr;
    CLI::Option* restarts = nullptr;
    CLI::Option* tolerance = nullptr;
    CLI::Option* max_iterations = nullptr;
    CLI::Option* suites = nullptr;
    CLI::Option* samples = nullptr;
    CLI::Option* clean_seeds = nullptr;
    CLI::Option* cover_deltas = nullptr;
    CLI::Option* cover_arms = nullptr;
    CLI::Option* fault_radius_scale = nullptr;
};

void add_common(CLI::App* app, CliOptions& o, Registered& r)
{
    r.config = app->add_option("--config", o.config, "JSON experiment config");
    r.instance = app->add_option("--instance", o.instance, "JSON instance file");
    r.horizon = app->add_option("--horizon", o.horizon, "number of rounds T");
    r.seeds = app->add_option("--seeds", o.seeds, "number of seeds (base_seed, base_seed+1, ...)");
    r.base_seed = app->add_option("--base-seed", o.base_seed, "first seed when --seeds is used");
    r.seed_list = app->add_option("--seed-list", o.seed_list, "explicit seeds")->delimiter(',');
    r.out = app->add_option("--out", o.out, "output directory");
    r.emit_traces = app->add_flag("--emit-traces", o.emit_traces, "also write per-round trace CSVs");
    r.explore_length = app->add_option("--explore-length", o.explore_length, "explore-first L override");
    r.restarts = app->add_option("--restarts", o.restarts, "optimizer restarts");
    r.tolerance = app->add_option("--tolerance", o.tolerance, "optimizer tolerance");
    r.max_iterations = app->add_option("--max-iterations", o.max_iterations, "optimizer iteration cap");
    r.seed_list->excludes(r.seeds);
    r.seed_list->excludes(r.base_seed);
}

ExperimentConfig effective_config(const CliOptions& o, const Registered& r)
{
    ExperimentConfig cfg = r.config->count() ? load_config(o.config) : ExperimentConfig{};
    if (r.instance && r.instance->count()) {
        cfg.instance_path = o.instance;
        cfg.instance_json.reset();
    }
    if (r.algo && r.algo->count()) {
        cfg.algo.name = parse_algo_choice(o.algo).name;
    }
    if (r.mode && r.mode->count()) {
        cfg.algo.mode = parse_mode(o.mode, "mode");
    }
    if (r.algos && r.algos->count()) {
        cfg.algorithms.clear();
        for (const auto& tok : o.algos) {
            cfg.algorithms.push_back(parse_algo_choice(tok));
        }
    }
    if (r.horizon->count()) {
        cfg.horizon = o.horizon;
    }
    if (r.seed_list->count()) {
        cfg.seeds = o.seed_list;
    } else if (r.seeds->count() || r.base_seed->count()) {
        const std::uint64_t count = r.seeds->count() ? o.seeds : cfg.seeds.size();
        const std::uint64_t base = r.base_seed->count() ? o.base_seed : (cfg.seeds.empty() ? 0 : cfg.seeds.front());
        cfg.seeds = seed_range(base, static_cast<std::size_t>(count));
    }
    if (r.out->count()) {
        cfg.out_dir = o.out;
    }
    if (r.emit_traces->count()) {
        cfg.emit_traces = true;
    }
    if (r.explore_length->count()) {
        cfg.explore_length = o.explore_length;
    }
    if (r.restarts->count()) {
        cfg.optimizer.restarts = o.restarts;
    }
    if (r.tolerance->count()) {
        cfg.optimizer.tolerance = o.tolerance;
    }
    if (r.max_iterations->count()) {
        cfg.optimizer.max_iterations = o.max_iterations;
    }
    if (r.suites && r.suites->count()) {
        cfg.suites = o.suites;
    }
    for (const auto& name : cfg.suites) {
        const auto& known = validation_suite_names();
        if (std::find(known.begin(), known.end(), name) == known.end()) {
            throw ConfigError("suite: unknown suite \"" + name + "\"");
        }
    }
    if (r.samples && r.samples->count()) {
        cfg.validate.lipschitz_samples = o.samples;
        cfg.validate.cover_samples = o.samples;
    }
    if (r.clean_seeds && r.clean_seeds->count()) {
        cfg.validate.clean_seeds = o.clean_seeds;
    }
    if (r.cover_deltas && r.cover_deltas->count()) {
        cfg.validate.cover_deltas = o.cover_deltas;
    }
    if (r.cover_arms && r.cover_arms->count()) {
        cfg.validate.cover_arms = o.cover_arms;
    }
    if (r.fault_radius_scale && r.fault_radius_scale->count()) {
        cfg.validate.radius_scale = o.fault_radius_scale;
    }
    cfg.check();
    return cfg;
}

void write_file(const std::filesystem::path& path, const std::string& body)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw std::runtime_error("cannot write " + path.string());
    }
    f << body;
}

void ensure_dir(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
    }
}

std::string policy_str(const Policy& p)
{
    std::string s = "(";
    for (std::size_t j = 0; j < p.arms(); ++j) {
        s += (j ? ", " : "") + format_double(p[j]);
    }
    return s + ")";
}

std::string trace_meta(const ArtifactHeader& header, const BanditInstance& instance, const AgentKind& kind,
                       const AlgoChoice& choice, const ExperimentConfig& cfg)
{
    std::ostringstream m;
    m << header.line() << '\n';
    m << "instance_id=" << instance.id() << '\n';
    m << "agents=" << instance.agents() << '\n';
    m << "arms=" << instance.arms() << '\n';
    m << "agent_kind=" << choice.name << '\n';
    m << "mode=" << (choice.mode == ScheduleMode::A ? "a" : "b") << '\n';
    m << "horizon=" << cfg.horizon << '\n';
    m << "schedule_constant_explore_first=" << format_double(cfg.constants.explore_first) << '\n';
    m << "schedule_constant_epsilon=" << format_double(cfg.constants.epsilon) << '\n';
    if (const auto* ef = std::get_if<ExploreFirstSpec>(&kind)) {
        m << "exploration_length=" << ef->exploration_length << '\n';
    }
    m << "arm_indexing=0-based\n";
    return m.str();
}

struct Summary {
    std::string label;
    double final_mean;
    double final_se;
    std::string slope;
};

Summary summarize(const RegretCurve& curve, std::uint64_t horizon)
{
    const CurvePoint& last = curve.points.back();
    Summary s{curve.agent, last.mean_cum_regret, last.stderr_cum_regret, "n/a"};
    const auto t_min = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(horizon))));
    try {
        s.slope = format_double(fit_regret_slope(curve, t_min, horizon));
    } catch (const AnalysisError& e) {
        s.slope = std::string("n/a (") + e.what() + ")";
    }
    return s;
}

int run_experiments(const ExperimentConfig& cfg, const std::vector<AlgoChoice>& algos, bool sweep,
                    std::ostream& out)
{
    const BanditInstance instance = resolve_instance(cfg);
    std::vector<AgentKind> kinds;
    for (const auto& a : algos) {
        kinds.push_back(make_agent_kind(a, instance, cfg));
    }
    const std::string canonical = canonical_config(cfg, instance, algos);
    ArtifactHeader header{hash_hex(canonical), describe_seeds(cfg.seeds), {{"instance", instance.id()}}};
    header.extra.emplace_back("horizon", std::to_string(cfg.horizon));

    const OptimalPolicy optimum = optimal_nsw(instance);
    EpisodeOptions options;
    options.optimizer = cfg.optimizer;

    std::vector<RegretCurve> curves;
    std::vector<std::pair<std::string, std::string>> trace_files;
    for (std::size_t a = 0; a < algos.size(); ++a) {
        EnsembleResult res = ensemble_regret(instance, kinds[a], cfg.horizon, cfg.seeds, optimum, options,
                                             cfg.emit_traces);
        if (cfg.emit_traces) {
            ArtifactHeader th = header;
            th.extra.emplace_back("agent", res.curve.agent);
            std::ostringstream csv;
            write_trace_csv(csv, th, res.traces);
            const std::string stem = sweep ? "traces_" + res.curve.agent : "traces";
            trace_files.emplace_back(stem + ".csv", csv.str());
            trace_files.emplace_back(stem + ".meta", trace_meta(th, instance, kinds[a], algos[a], cfg));
        }
        curves.push_back(std::move(res.curve));
    }

    ensure_dir(cfg.out_dir);
    std::ostringstream curve_csv;
    if (sweep) {
        write_sweep_csv(curve_csv, header, curves);
        write_file(cfg.out_dir / "sweep_curve.csv", curve_csv.str());
    } else {
        ArtifactHeader ch = header;
        ch.extra.emplace_back("agent", curves.front().agent);
        write_curve_csv(curve_csv, ch, curves.front());
        write_file(cfg.out_dir / "curve.csv", curve_csv.str());
    }
    for (const auto& [name, body] : trace_files) {
        write_file(cfg.out_dir / name, body);
    }

    std::ostringstream summary;
    summary << header.line() << '\n';
    summary << "instance: " << instance.id() << " (N=" << instance.agents() << ", K=" << instance.arms() << ")\n";
    summary << "horizon: " << cfg.horizon << "\n";
    summary << "seeds: " << cfg.seeds.size() << " (" << describe_seeds(cfg.seeds) << ")\n";
    summary << "optimal policy: " << policy_str(optimum.policy) << "\n";
    summary << "optimal NSW: " << format_double(optimum.value) << (optimum.converged ? "" : " (not converged)")
            << "\n";
    for (const auto& c : curves) {
        const Summary s = summarize(c, cfg.horizon);
        summary << s.label << ": final mean R^T = " << format_double(s.final_mean)
                << " (stderr " << format_double(s.final_se) << "), R^T/T = "
                << format_double(s.final_mean / static_cast<double>(cfg.horizon)) << ", slope over [sqrt(T), T] = "
                << s.slope << "\n";
    }
    write_file(cfg.out_dir / "summary.txt", summary.str());
    if (!optimum.converged) {
        out << "warning: optimal-policy optimizer did not converge; regret uses its best iterate\n";
    }
    out << summary.str();
    return kSuccess;
}

int run_validate(const ExperimentConfig& cfg, std::ostream& out)
{
    ValidateOptions opt = cfg.validate;
    if (cfg.instance_path || cfg.instance_json) {
        opt.clean_instance = resolve_instance(cfg);
    }
    const auto results = run_validation(opt, cfg.suites);
    bool all = true;
    const SuiteResult* first_failure = nullptr;
    for (const auto& r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        if (!r.passed && !first_failure) {
            first_failure = &r;
        }
        all = all && r.passed;
    }
    if (first_failure) {
        out << "first counterexample (" << first_failure->name << "): " << first_failure->counterexample << "\n";
    }
    return all ? kSuccess : kRuntimeFailure;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Nash-social-welfare multi-agent bandits: regret runs, sweeps and property validation"};
    app.require_subcommand(1);
    CliOptions o;

    Registered run_r, sweep_r, validate_r;
    CLI::App* run_cmd = app.add_subcommand("run", "run one algorithm over a set of seeds");
    add_common(run_cmd, o, run_r);
    run_r.algo = run_cmd->add_option("--algo", o.algo, "explorefirst | epsgreedy | ucb");
    run_r.mode = run_cmd->add_option("--mode", o.mode, "schedule mode a | b");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run several algorithms on paired seeds");
    add_common(sweep_cmd, o, sweep_r);
    sweep_r.algos = sweep_cmd->add_option("--algos", o.algos, "algorithms as name[:mode], comma separated")
                        ->delimiter(',');
    sweep_r.algo = sweep_cmd->add_option("--algo", o.algo, "single algorithm (same as --algos name)");
    sweep_r.mode = sweep_cmd->add_option("--mode", o.mode, "mode for --algo");

    CLI::App* validate_cmd = app.add_subcommand("validate", "run the property suites");
    add_common(validate_cmd, o, validate_r);
    validate_r.suites = validate_cmd->add_option("--suite", o.suites, "suites to run (default: all)")
                            ->delimiter(',');
    validate_r.samples = validate_cmd->add_option("--samples", o.samples, "samples per Lipschitz/cover check");
    validate_r.clean_seeds = validate_cmd->add_option("--clean-seeds", o.clean_seeds, "seeds for clean-event suite");
    validate_r.cover_deltas = validate_cmd->add_option("--cover-delta", o.cover_deltas, "cover radii")
                                  ->delimiter(',');
    validate_r.cover_arms = validate_cmd->add_option("--cover-arms", o.cover_arms, "cover arm counts")
                                ->delimiter(',');
    validate_r.fault_radius_scale = validate_cmd->add_option("--fault-radius-scale", o.fault_radius_scale,
                                                             "test hook: scale confidence radii");
    validate_r.fault_radius_scale->group("");

    std::vector<std::string> argv_store;
    argv_store.emplace_back("nswbandit");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_store) {
        argv.push_back(s.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kConfigError;
    }

    ExperimentConfig cfg;
    std::vector<AlgoChoice> algos;
    try {
        if (run_cmd->parsed()) {
            cfg = effective_config(o, run_r);
            algos = {cfg.algo};
        } else if (sweep_cmd->parsed()) {
            cfg = effective_config(o, sweep_r);
            algos = cfg.algorithms;
            if (sweep_r.algo->count()) {
                algos.push_back(cfg.algo);
            }
            if (algos.empty()) {
                throw ConfigError("algorithms: sweep needs at least one algorithm (--algos)");
            }
        } else {
            cfg = effective_config(o, validate_r);
        }
        if (!validate_cmd->parsed()) {
            const BanditInstance instance = resolve_instance(cfg);
            for (const auto& a : algos) {
                (void)make_agent_kind(a, instance, cfg);
            }
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    }

    try {
        if (validate_cmd->parsed()) {
            return run_validate(cfg, out);
        }
        return run_experiments(cfg, algos, sweep_cmd->parsed(), out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kRuntimeFailure;
    }
}

} // namespace nswbandit::cli
