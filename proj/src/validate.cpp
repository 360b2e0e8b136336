#include "nswbandit/validate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "nswbandit/algorithms.hpp"
#include "nswbandit/errors.hpp"
#include "nswbandit/export.hpp"
#include "nswbandit/harness.hpp"
#include "nswbandit/nsw.hpp"
#include "nswbandit/simplex_opt.hpp"

namespace nswbandit {

namespace {

// Allowance for rounding in inequalities that hold exactly over the reals.
constexpr double kRoundingSlack = 1e-12;

std::size_t draw_size(RngStream& rng, std::size_t lo, std::size_t hi)
{
    return lo + static_cast<std::size_t>(rng.next_u64() % (hi - lo + 1));
}

RewardMatrix random_matrix(RngStream& rng, std::size_t n, std::size_t k)
{
    std::vector<double> v(n * k);
    for (double& x : v) {
        x = rng.uniform01();
    }
    return RewardMatrix(n, k, std::move(v));
}

std::string join(std::span<const double> v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? "," : "") + format_double(v[i]);
    }
    return s + ")";
}

std::string matrix_str(const RewardMatrix& mu)
{
    std::string s = "[";
    for (std::size_t i = 0; i < mu.agents(); ++i) {
        s += (i ? "," : "") + join(mu.row(i));
    }
    return s + "]";
}

} // namespace

const std::vector<std::string>& validation_suite_names()
{
    static const std::vector<std::string> names{"product-difference", "lipschitz-policy", "lipschitz-means",
                                                "nsw-range",          "cover",            "oracle-nsw",
                                                "oracle-ucb",         "clean-event"};
    return names;
}

SuiteResult suite_product_difference(const ValidateOptions& opt)
{
    SuiteResult r;
    r.name = "product-difference";
    RngStream rng(opt.seed, "validate-product-difference");
    double worst = -1.0;
    for (std::size_t s = 0; s < opt.lipschitz_samples; ++s) {
        const std::size_t n = draw_size(rng, 1, opt.max_agents);
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.uniform01();
            b[i] = rng.uniform01();
        }
        double pa = 1.0, pb = 1.0, bound = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            pa *= a[i];
            pb *= b[i];
            bound += std::abs(a[i] - b[i]);
        }
        const double lhs = std::abs(pa - pb);
        worst = std::max(worst, lhs - bound);
        if (lhs > bound + kRoundingSlack && r.passed) {
            r.passed = false;
            r.counterexample = "a=" + join(a) + " b=" + join(b) + " |prod a - prod b|=" + format_double(lhs)
                + " > " + format_double(bound);
        }
    }
    r.detail = std::to_string(opt.lipschitz_samples) + " samples, max(lhs - rhs)=" + format_double(worst);
    return r;
}

SuiteResult suite_lipschitz_policy(const ValidateOptions& opt)
{
    SuiteResult r;
    r.name = "lipschitz-policy";
    RngStream rng(opt.seed, "validate-lipschitz-policy");
    double worst = -1e300;
    for (std::size_t s = 0; s < opt.lipschitz_samples; ++s) {
        const std::size_t n = draw_size(rng, 1, opt.max_agents);
        const std::size_t k = draw_size(rng, 1, opt.max_arms);
        const RewardMatrix mu = random_matrix(rng, n, k);
        const Policy p1 = sample_uniform_simplex(k, rng);
        const Policy p2 = sample_uniform_simplex(k, rng);
        const double lhs = std::abs(nsw_eval(p1, mu) - nsw_eval(p2, mu));
        const double rhs = static_cast<double>(n) * l1_distance(p1, p2);
        worst = std::max(worst, lhs - rhs);
        if (lhs > rhs + kRoundingSlack && r.passed) {
            r.passed = false;
            r.counterexample = "mu=" + matrix_str(mu) + " p1=" + join(p1.weights()) + " p2=" + join(p2.weights());
        }
    }
    r.detail = std::to_string(opt.lipschitz_samples) + " samples, max(lhs - rhs)=" + format_double(worst);
    return r;
}

SuiteResult suite_lipschitz_means(const ValidateOptions& opt)
{
    SuiteResult r;
    r.name = "lipschitz-means";
    RngStream rng(opt.seed, "validate-lipschitz-means");
    double worst = -1e300;
    for (std::size_t s = 0; s < opt.lipschitz_samples; ++s) {
        const std::size_t n = draw_size(rng, 1, opt.max_agents);
        const std::size_t k = draw_size(rng, 1, opt.max_arms);
        const RewardMatrix m1 = random_matrix(rng, n, k);
        const RewardMatrix m2 = random_matrix(rng, n, k);
        const Policy p = sample_uniform_simplex(k, rng);
        const double lhs = std::abs(nsw_eval(p, m1) - nsw_eval(p, m2));
        double rhs = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                rhs += p[j] * std::abs(m1(i, j) - m2(i, j));
            }
        }
        worst = std::max(worst, lhs - rhs);
        if (lhs > rhs + kRoundingSlack && r.passed) {
            r.passed = false;
            r.counterexample = "p=" + join(p.weights()) + " mu1=" + matrix_str(m1) + " mu2=" + matrix_str(m2);
        }
    }
    r.detail = std::to_string(opt.lipschitz_samples) + " samples, max(lhs - rhs)=" + format_double(worst);
    return r;
}

SuiteResult suite_nsw_range(const ValidateOptions& opt)
{
    SuiteResult r;
    r.name = "nsw-range";
    RngStream rng(opt.seed, "validate-nsw-range");
    for (std::size_t s = 0; s < opt.lipschitz_samples && r.passed; ++s) {
        const std::size_t n = draw_size(rng, 1, opt.max_agents);
        const std::size_t k = draw_size(rng, 1, opt.max_arms);
        const RewardMatrix mu = random_matrix(rng, n, k);
        const Policy p = sample_uniform_simplex(k, rng);
        const double v = nsw_eval(p, mu);
        if (!(v >= 0.0 && v <= 1.0)) {
            r.passed = false;
            r.counterexample = "NSW=" + format_double(v) + " at p=" + join(p.weights()) + " mu=" + matrix_str(mu);
        }
        if (n == 1 && v != agent_utility(p, mu, 0)) {
            r.passed = false;
            r.counterexample = "single-agent NSW differs from utility at p=" + join(p.weights());
        }
    }
    r.detail = std::to_string(opt.lipschitz_samples) + " samples in [0,1]";
    return r;
}

SuiteResult suite_cover(const ValidateOptions& opt)
{
    SuiteResult r;
    r.name = "cover";
    std::ostringstream detail;
    for (std::size_t k : opt.cover_arms) {
        for (double delta : opt.cover_deltas) {
            const DeltaCover cover = make_delta_cover(k, delta);
            RngStream rng(opt.seed, "validate-cover-" + std::to_string(k) + "-" + format_double(delta));
            double max_gap = 0.0;
            for (std::size_t s = 0; s < opt.cover_samples; ++s) {
                const Policy p = sample_uniform_simplex(k, rng);
                const double gap = cover.distance_to(p);
                max_gap = std::max(max_gap, gap);
                if (gap > delta && r.passed) {
                    r.passed = false;
                    r.counterexample = "K=" + std::to_string(k) + " delta=" + format_double(delta)
                        + " point " + join(p.weights()) + " is " + format_double(gap) + " from the cover";
                }
            }
            const bool size_ok = static_cast<double>(cover.size()) <= cover.size_bound();
            if (!size_ok && r.passed) {
                r.passed = false;
                r.counterexample = "K=" + std::to_string(k) + " delta=" + format_double(delta) + " size "
                    + std::to_string(cover.size()) + " > bound " + format_double(cover.size_bound());
            }
            detail << "[K=" << k << " delta=" << format_double(delta) << " size=" << cover.size()
                   << " bound=" << format_double(cover.size_bound()) << " max_gap=" << format_double(max_gap)
                   << "] ";
        }
    }
    r.detail = detail.str();
    return r;
}

SuiteResult suite_oracle_nsw(const ValidateOptions& opt)
{
    SuiteResult r;
    r.name = "oracle-nsw";
    RngStream rng(opt.seed, "validate-oracle-nsw");
    double worst_fine = -1e300;
    double worst_coarse = -1e300;
    for (std::size_t s = 0; s < opt.oracle_instances; ++s) {
        const std::size_t n = draw_size(rng, 1, 3);
        const std::size_t k = draw_size(rng, 1, 3);
        const RewardMatrix mu = random_matrix(rng, n, k);
        const double got = nsw_eval(maximize_nsw(mu).policy, mu);
        auto f = [&mu](const Policy& p) { return nsw_eval(p, mu); };
        const double coarse = brute_force_maximize(f, k, 50).objective_value;
        const double fine = brute_force_maximize(f, k, 200).objective_value;
        worst_coarse = std::max(worst_coarse, coarse - got);
        worst_fine = std::max(worst_fine, fine - got);
        if ((got < coarse - 5e-2 || got < fine - 1e-2) && r.passed) {
            r.passed = false;
            r.counterexample = "mu=" + matrix_str(mu) + " optimizer=" + format_double(got) + " grid50="
                + format_double(coarse) + " grid200=" + format_double(fine);
        }
    }
    r.detail = std::to_string(opt.oracle_instances) + " instances, max(grid200 - opt)=" + format_double(worst_fine)
        + " max(grid50 - opt)=" + format_double(worst_coarse);
    return r;
}

SuiteResult suite_oracle_ucb(const ValidateOptions& opt)
{
    SuiteResult r;
    r.name = "oracle-ucb";
    RngStream rng(opt.seed, "validate-oracle-ucb");
    double worst = -1e300;
    for (std::size_t s = 0; s < opt.oracle_instances; ++s) {
        const std::size_t n = draw_size(rng, 1, 3);
        const std::size_t k = draw_size(rng, 1, 3);
        const RewardMatrix mu = random_matrix(rng, n, k);
        std::vector<double> radii(k);
        for (double& x : radii) {
            x = rng.uniform01();
        }
        const double alpha = 2.0 * rng.uniform01();
        const double got = maximize_ucb_objective(mu, radii, alpha).objective_value;
        const double grid = brute_force_maximize(
            [&](const Policy& p) { return ucb_objective(p, mu, radii, alpha); }, k, 100).objective_value;
        worst = std::max(worst, grid - got);
        if (got < grid - 2e-2 && r.passed) {
            r.passed = false;
            r.counterexample = "mu=" + matrix_str(mu) + " radii=" + join(radii) + " alpha=" + format_double(alpha)
                + " optimizer=" + format_double(got) + " grid100=" + format_double(grid);
        }
    }
    r.detail = std::to_string(opt.oracle_instances) + " objectives, max(grid100 - opt)=" + format_double(worst);
    return r;
}

SuiteResult suite_clean_event(const ValidateOptions& opt)
{
    SuiteResult r;
    r.name = "clean-event";
    const BanditInstance instance = opt.clean_instance ? *opt.clean_instance : benchmark_instance();
    const std::uint64_t horizon = *std::max_element(opt.clean_checkpoints.begin(), opt.clean_checkpoints.end());
    const auto seeds = seed_range(opt.seed, opt.clean_seeds);
    const CleanEventReport report = validate_clean_event(instance, UcbSpec{ScheduleMode::A}, horizon, seeds,
                                                         opt.clean_checkpoints, {}, opt.radius_scale);
    std::ostringstream detail;
    detail << instance.id() << ", " << opt.clean_seeds << " seeds";
    if (opt.radius_scale != 1.0) {
        detail << ", radius scale " << format_double(opt.radius_scale);
    }
    for (const auto& row : report.rows) {
        const double threshold = row.bound - opt.clean_slack;
        detail << " [t=" << row.t << " freq=" << format_double(row.frequency)
               << " bound=" << format_double(row.bound) << "]";
        if (row.frequency < threshold && r.passed) {
            r.passed = false;
            r.counterexample = "t=" + std::to_string(row.t) + ": clean event held in " + std::to_string(row.satisfied)
                + "/" + std::to_string(row.n_seeds) + " runs, below 1 - 2/t^3 - " + format_double(opt.clean_slack)
                + " = " + format_double(threshold);
        }
    }
    r.detail = detail.str();
    return r;
}

std::vector<SuiteResult> run_validation(const ValidateOptions& opt, const std::vector<std::string>& only)
{
    using Suite = std::function<SuiteResult(const ValidateOptions&)>;
    const std::vector<std::pair<std::string, Suite>> suites{
        {"product-difference", suite_product_difference},
        {"lipschitz-policy", suite_lipschitz_policy},
        {"lipschitz-means", suite_lipschitz_means},
        {"nsw-range", suite_nsw_range},
        {"cover", suite_cover},
        {"oracle-nsw", suite_oracle_nsw},
        {"oracle-ucb", suite_oracle_ucb},
        {"clean-event", suite_clean_event},
    };
    for (const auto& name : only) {
        const bool known = std::any_of(suites.begin(), suites.end(), [&](const auto& s) { return s.first == name; });
        if (!known) {
            throw ParameterError("unknown validation suite \"" + name + "\"");
        }
    }
    std::vector<SuiteResult> results;
    for (const auto& [name, fn] : suites) {
        if (only.empty() || std::find(only.begin(), only.end(), name) != only.end()) {
            results.push_back(fn(opt));
        }
    }
    return results;
}

} // namespace nswbandit
