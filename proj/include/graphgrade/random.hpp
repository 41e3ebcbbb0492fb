#pragma once

// Seeded random streams with platform-independent output.
//
// std::uniform_int_distribution and std::normal_distribution are
// implementation-defined, so replay across standard libraries would break.
// The bounded-integer and Gaussian transforms are spelled out here instead.

#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace graphgrade {

/// Anything the item samplers can draw from. Tests substitute scripted draws.
template <class T>
concept DrawSource = requires(T& t, int lo, int hi) {
    { t.uniform_int(lo, hi) } -> std::convertible_to<int>;
    { t.sign() } -> std::convertible_to<int>;
};

/// DrawSource that can also produce continuous noise.
template <class T>
concept NoiseSource = DrawSource<T> && requires(T& t) {
    { t.unit() } -> std::convertible_to<double>;
    { t.normal() } -> std::convertible_to<double>;
};

/// splitmix64 finalizer; used to derive independent per-item seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index)
{
    return mix_seed(mix_seed(base ^ mix_seed(stream)) + index);
}

class SeededStream {
public:
    explicit SeededStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer on the inclusive range [lo, hi].
    int uniform_int(int lo, int hi)
    {
        const auto span = static_cast<std::uint64_t>(static_cast<std::int64_t>(hi) - lo) + 1;
        // Rejection sampling removes modulo bias.
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % span);
        std::uint64_t v = engine_();
        while (v >= limit) v = engine_();
        return static_cast<int>(lo + static_cast<std::int64_t>(v % span));
    }

    /// -1 or +1 with equal probability.
    int sign() { return uniform_int(0, 1) == 0 ? -1 : 1; }

    /// Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller (one output per call).
    double normal()
    {
        double u1 = unit();
        while (u1 <= 0.0) u1 = unit();
        const double u2 = unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

static_assert(NoiseSource<SeededStream>);

/// Seed from the system entropy source.
inline std::uint64_t entropy_seed()
{
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

}  // namespace graphgrade
