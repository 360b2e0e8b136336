#include "nswbandit/rng.hpp"

#include <cmath>
#include <numbers>

#include "nswbandit/errors.hpp"

namespace nswbandit {

std::uint64_t fnv1a64(std::string_view bytes) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::string_view id, std::uint64_t run)
{
    std::uint64_t h = mix64(seed);
    h = mix64(h ^ fnv1a64(id));
    h = mix64(h ^ run);
    return h;
}

} // namespace

RngStream::RngStream(std::uint64_t seed, std::string stream_id, std::uint64_t run_index)
    : seed_(seed)
    , stream_id_(std::move(stream_id))
    , run_index_(run_index)
    , engine_(derive_seed(seed_, stream_id_, run_index_))
{
}

double RngStream::uniform01()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_open0()
{
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double RngStream::exponential()
{
    return -std::log(uniform_open0());
}

double RngStream::normal()
{
    const double u1 = uniform_open0();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::gamma(double shape)
{
    if (!(shape > 0.0) || !std::isfinite(shape)) {
        throw ParameterError("gamma shape must be positive and finite");
    }
    if (shape < 1.0) {
        const double boost = std::pow(uniform_open0(), 1.0 / shape);
        return gamma(shape + 1.0) * boost;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = 0.0;
        double v = 0.0;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform_open0();
        if (u < 1.0 - 0.0331 * x * x * x * x) {
            return d * v;
        }
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

double RngStream::beta(double a, double b)
{
    const double x = gamma(a);
    const double y = gamma(b);
    const double s = x + y;
    // Both draws can underflow to 0 for tiny shapes; fall back on the mean.
    if (!(s > 0.0)) {
        return a / (a + b);
    }
    return x / s;
}

} // namespace nswbandit
