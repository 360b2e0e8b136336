#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace nswbandit {

// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

// SplitMix64 finalizer; used to derive sub-stream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Named, reproducible random stream.
///
/// The engine state is derived from (seed, stream_id, run_index) by hashing, so
/// two streams with different labels never share state and draws from one never
/// perturb another. std::mt19937_64 is bit-exact across conforming
/// implementations; all transforms to floating point are done here rather than
/// through <random> distributions, whose output is implementation-defined.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string stream_id, std::uint64_t run_index = 0);

    std::uint64_t seed() const noexcept { return seed_; }
    const std::string& stream_id() const noexcept { return stream_id_; }
    std::uint64_t run_index() const noexcept { return run_index_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01();
    // Uniform on (0, 1]; safe as a log() argument.
    double uniform_open0();
    // Unit-rate exponential.
    double exponential();
    // Standard normal (Box-Muller, one variate per call).
    double normal();
    // Gamma(shape, 1) by Marsaglia-Tsang; shape < 1 handled by the boost U^(1/a).
    double gamma(double shape);
    // Beta(a, b) as X/(X+Y) with X ~ Gamma(a), Y ~ Gamma(b).
    double beta(double a, double b);
    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::uint64_t seed_;
    std::string stream_id_;
    std::uint64_t run_index_;
    std::mt19937_64 engine_;
};

} // namespace nswbandit
