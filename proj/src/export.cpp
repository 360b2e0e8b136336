#include "nswbandit/export.hpp"

#include <array>
#include <charconv>
#include <cstdio>

#include "nswbandit/rng.hpp"

namespace nswbandit {

std::string format_double(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string hash_hex(std::string_view text)
{
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
    return std::string(buf.data(), 16);
}

std::string ArtifactHeader::line() const
{
    std::string s = "# nswbandit config_hash=" + config_hash + " seeds=" + seeds;
    for (const auto& [k, v] : extra) {
        s += " " + k + "=" + v;
    }
    return s;
}

std::string describe_seeds(const std::vector<std::uint64_t>& seeds)
{
    if (seeds.empty()) {
        return "none";
    }
    bool contiguous = true;
    for (std::size_t i = 1; i < seeds.size(); ++i) {
        if (seeds[i] != seeds[i - 1] + 1) {
            contiguous = false;
            break;
        }
    }
    if (contiguous && seeds.size() > 1) {
        return std::to_string(seeds.front()) + ".." + std::to_string(seeds.back());
    }
    std::string s;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        if (i) {
            s += ",";
        }
        s += std::to_string(seeds[i]);
    }
    return s;
}

namespace {

void curve_rows(std::ostream& os, const RegretCurve& curve, const std::string& prefix)
{
    for (const auto& p : curve.points) {
        os << prefix << p.t << ',' << format_double(p.mean_cum_regret) << ',' << format_double(p.stderr_cum_regret)
           << ',' << p.n_seeds << '\n';
    }
}

} // namespace

void write_curve_csv(std::ostream& os, const ArtifactHeader& header, const RegretCurve& curve)
{
    os << header.line() << '\n';
    os << "t,mean_cum_regret,stderr,n_seeds\n";
    curve_rows(os, curve, "");
}

void write_sweep_csv(std::ostream& os, const ArtifactHeader& header, const std::vector<RegretCurve>& curves)
{
    os << header.line() << '\n';
    os << "algo,t,mean_cum_regret,stderr,n_seeds\n";
    for (const auto& c : curves) {
        curve_rows(os, c, c.agent + ",");
    }
}

void write_trace_csv(std::ostream& os, const ArtifactHeader& header, const std::vector<TraceRow>& rows)
{
    os << header.line() << '\n';
    os << "seed,t,arm,instant_regret,cum_regret\n";
    for (const auto& r : rows) {
        os << r.seed << ',' << r.t << ',' << r.arm << ',' << format_double(r.instant_regret) << ','
           << format_double(r.cum_regret) << '\n';
    }
}

void write_clean_event_csv(std::ostream& os, const ArtifactHeader& header, const CleanEventReport& report)
{
    os << header.line() << '\n';
    os << "t,satisfied,n_seeds,frequency,bound\n";
    for (const auto& r : report.rows) {
        os << r.t << ',' << r.satisfied << ',' << r.n_seeds << ',' << format_double(r.frequency) << ','
           << format_double(r.bound) << '\n';
    }
}

} // namespace nswbandit
