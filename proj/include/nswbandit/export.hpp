#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "nswbandit/harness.hpp"

namespace nswbandit {

// Shortest round-trip decimal form, locale independent ('.' separator).
std::string format_double(double v);

// 16 lowercase hex digits of fnv1a64(text).
std::string hash_hex(std::string_view text);

/// First line of every artifact: "# nswbandit <key=value ...>".
struct ArtifactHeader {
    std::string config_hash;
    std::string seeds;
    std::vector<std::pair<std::string, std::string>> extra;

    std::string line() const;
};

// Compact seed description: "0..19" for a contiguous run, else a comma list.
std::string describe_seeds(const std::vector<std::uint64_t>& seeds);

// t,mean_cum_regret,stderr,n_seeds
void write_curve_csv(std::ostream& os, const ArtifactHeader& header, const RegretCurve& curve);

// algo,t,mean_cum_regret,stderr,n_seeds
void write_sweep_csv(std::ostream& os, const ArtifactHeader& header, const std::vector<RegretCurve>& curves);

// seed,t,arm,instant_regret,cum_regret (arm is 0-based)
void write_trace_csv(std::ostream& os, const ArtifactHeader& header, const std::vector<TraceRow>& rows);

// t,satisfied,n_seeds,frequency,bound
void write_clean_event_csv(std::ostream& os, const ArtifactHeader& header, const CleanEventReport& report);

} // namespace nswbandit
