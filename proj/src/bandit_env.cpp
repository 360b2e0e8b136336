#include "nswbandit/bandit_env.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "nswbandit/errors.hpp"

namespace nswbandit {

namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

RewardDistribution RewardDistribution::bernoulli(double mean)
{
    if (!in_unit(mean)) {
        throw ParameterError("mean out of [0,1]");
    }
    return RewardDistribution(Bernoulli{mean});
}

RewardDistribution RewardDistribution::point_mass(double value)
{
    if (!in_unit(value)) {
        throw ParameterError("value out of [0,1]");
    }
    return RewardDistribution(PointMass{value});
}

RewardDistribution RewardDistribution::beta(double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw ParameterError("beta parameters must be positive");
    }
    return RewardDistribution(BetaDist{a, b});
}

RewardDistribution RewardDistribution::uniform(double lo, double hi)
{
    if (!in_unit(lo) || !in_unit(hi) || lo > hi) {
        throw ParameterError("uniform range needs 0 <= lo <= hi <= 1");
    }
    return RewardDistribution(UniformRange{lo, hi});
}

std::string_view RewardDistribution::kind_name() const noexcept
{
    return std::visit(overloaded{[](const Bernoulli&) { return std::string_view("bernoulli"); },
                                 [](const PointMass&) { return std::string_view("pointmass"); },
                                 [](const BetaDist&) { return std::string_view("beta"); },
                                 [](const UniformRange&) { return std::string_view("uniform"); }},
                      kind_);
}

double RewardDistribution::mean() const noexcept
{
    return std::visit(overloaded{[](const Bernoulli& d) { return d.mean; },
                                 [](const PointMass& d) { return d.value; },
                                 [](const BetaDist& d) { return d.a / (d.a + d.b); },
                                 [](const UniformRange& d) { return 0.5 * (d.lo + d.hi); }},
                      kind_);
}

double RewardDistribution::sample(RngStream& rng) const
{
    return std::visit(overloaded{[&](const Bernoulli& d) { return rng.bernoulli(d.mean) ? 1.0 : 0.0; },
                                 [&](const PointMass& d) {
                                     // Still consume a draw so streams stay aligned across kinds.
                                     (void)rng.next_u64();
                                     return d.value;
                                 },
                                 [&](const BetaDist& d) { return rng.beta(d.a, d.b); },
                                 [&](const UniformRange& d) {
                                     return std::min(d.hi, d.lo + (d.hi - d.lo) * rng.uniform01());
                                 }},
                      kind_);
}

namespace {

RewardMatrix means_of(std::size_t agents, std::size_t arms, const std::vector<RewardDistribution>& ds)
{
    if (ds.size() != agents * arms) {
        throw DimensionError("instance has " + std::to_string(ds.size()) + " distributions, expected "
                             + std::to_string(agents * arms));
    }
    std::vector<double> m;
    m.reserve(ds.size());
    for (const auto& d : ds) {
        m.push_back(d.mean());
    }
    return RewardMatrix(agents, arms, std::move(m));
}

} // namespace

BanditInstance::BanditInstance(std::size_t agents, std::size_t arms, std::vector<RewardDistribution> row_major,
                               std::string id)
    : agents_(agents)
    , arms_(arms)
    , id_(std::move(id))
    , distributions_(std::move(row_major))
    , true_means_(means_of(agents_, arms_, distributions_))
{
}

const RewardDistribution& BanditInstance::distribution(std::size_t agent, std::size_t arm) const
{
    if (agent >= agents_ || arm >= arms_) {
        throw IndexError("distribution index out of range");
    }
    return distributions_[agent * arms_ + arm];
}

void sample_rewards(const BanditInstance& instance, std::size_t arm, RngStream& rng, std::span<double> out)
{
    if (arm >= instance.arms()) {
        throw IndexError("arm " + std::to_string(arm) + " out of range for K=" + std::to_string(instance.arms()));
    }
    if (out.size() != instance.agents()) {
        throw DimensionError("reward buffer length differs from agent count");
    }
    for (std::size_t i = 0; i < instance.agents(); ++i) {
        out[i] = instance.distribution(i, arm).sample(rng);
    }
}

std::vector<double> sample_rewards(const BanditInstance& instance, std::size_t arm, RngStream& rng)
{
    std::vector<double> out(instance.agents());
    sample_rewards(instance, arm, rng, out);
    return out;
}

std::size_t sample_arm(const Policy& p, RngStream& rng)
{
    const double u = rng.uniform01();
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t j = 0; j < p.arms(); ++j) {
        if (p[j] > 0.0) {
            last_positive = j;
            cumulative += p[j];
            if (u < cumulative) {
                return j;
            }
        }
    }
    // Rounding left the cumulative sum a hair below 1.
    return last_positive;
}

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& field, const std::string& what)
{
    throw ParseError(field + ": " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& where)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        parse_fail(where + key, "missing field");
    }
    return *it;
}

double number_field(const json& obj, const std::string& key, const std::string& where)
{
    const json& v = require(obj, key, where);
    if (!v.is_number()) {
        parse_fail(where + key, "expected a number");
    }
    return v.get<double>();
}

std::size_t count_field(const json& obj, const std::string& key)
{
    const json& v = require(obj, key, "");
    if (!v.is_number_integer() || v.get<long long>() < 1) {
        parse_fail(key, "expected a positive integer");
    }
    return v.get<std::size_t>();
}

RewardDistribution parse_distribution(const json& entry, const std::string& where)
{
    if (!entry.is_object()) {
        parse_fail(where, "expected an object");
    }
    const json& kind = require(entry, "kind", where + ".");
    if (!kind.is_string()) {
        parse_fail(where + ".kind", "expected a string");
    }
    const std::string k = kind.get<std::string>();
    const std::string prefix = where + ".";
    try {
        if (k == "bernoulli") {
            return RewardDistribution::bernoulli(number_field(entry, "mean", prefix));
        }
        if (k == "pointmass") {
            return RewardDistribution::point_mass(number_field(entry, "value", prefix));
        }
        if (k == "beta") {
            return RewardDistribution::beta(number_field(entry, "a", prefix), number_field(entry, "b", prefix));
        }
        if (k == "uniform") {
            return RewardDistribution::uniform(number_field(entry, "lo", prefix), number_field(entry, "hi", prefix));
        }
    } catch (const ParameterError& e) {
        parse_fail(where, e.what());
    }
    parse_fail(where + ".kind", "unknown kind \"" + k + "\"");
}

} // namespace

BanditInstance parse_instance(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("instance: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("instance: expected a JSON object");
    }
    const std::size_t agents = count_field(doc, "agents");
    const std::size_t arms = count_field(doc, "arms");
    const json& list = require(doc, "distributions", "");
    if (!list.is_array()) {
        parse_fail("distributions", "expected an array");
    }
    if (list.size() != agents * arms) {
        parse_fail("distributions", "has " + std::to_string(list.size()) + " entries, expected agents*arms = "
                                        + std::to_string(agents * arms));
    }
    std::vector<RewardDistribution> ds;
    ds.reserve(list.size());
    for (std::size_t idx = 0; idx < list.size(); ++idx) {
        ds.push_back(parse_distribution(list[idx], "distributions[" + std::to_string(idx) + "]"));
    }
    std::string id = "instance";
    if (auto it = doc.find("id"); it != doc.end()) {
        if (!it->is_string()) {
            parse_fail("id", "expected a string");
        }
        id = it->get<std::string>();
    }
    return BanditInstance(agents, arms, std::move(ds), std::move(id));
}

BanditInstance load_instance(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open instance file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

std::string instance_to_json(const BanditInstance& instance)
{
    json doc;
    doc["id"] = instance.id();
    doc["agents"] = instance.agents();
    doc["arms"] = instance.arms();
    json list = json::array();
    for (std::size_t i = 0; i < instance.agents(); ++i) {
        for (std::size_t j = 0; j < instance.arms(); ++j) {
            const auto& d = instance.distribution(i, j);
            json e;
            e["kind"] = d.kind_name();
            std::visit(overloaded{[&](const Bernoulli& b) { e["mean"] = b.mean; },
                                  [&](const PointMass& p) { e["value"] = p.value; },
                                  [&](const BetaDist& b) {
                                      e["a"] = b.a;
                                      e["b"] = b.b;
                                  },
                                  [&](const UniformRange& u) {
                                      e["lo"] = u.lo;
                                      e["hi"] = u.hi;
                                  }},
                       d.kind());
            list.push_back(std::move(e));
        }
    }
    doc["distributions"] = std::move(list);
    return doc.dump(2);
}

BanditInstance benchmark_instance()
{
    const double means[3][3] = {{0.9, 0.1, 0.5}, {0.1, 0.9, 0.5}, {0.5, 0.5, 0.6}};
    std::vector<RewardDistribution> ds;
    for (const auto& row : means) {
        for (double m : row) {
            ds.push_back(RewardDistribution::bernoulli(m));
        }
    }
    return BanditInstance(3, 3, std::move(ds), "benchmark-3x3-bernoulli");
}

BanditInstance split_majority_instance()
{
    std::vector<RewardDistribution> ds;
    for (int i = 0; i < 10; ++i) {
        const bool first = i < 4;
        ds.push_back(RewardDistribution::point_mass(first ? 1.0 : 0.0));
        ds.push_back(RewardDistribution::point_mass(first ? 0.0 : 1.0));
    }
    return BanditInstance(10, 2, std::move(ds), "split-majority-10x2");
}

} // namespace nswbandit
