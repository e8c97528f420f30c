#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace footrule {

namespace detail {

/// SplitMix64 finalizer; the seed/stream mixer used throughout.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Seedable random stream: xoshiro256++ whose state is derived from
/// (master_seed, stream_index) through SplitMix64. Equal seed pairs replay
/// the same sequence on any platform; distinct stream indices give
/// statistically independent streams. A stream is cheap to construct, so
/// give each replication its own rather than sharing one across threads.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
        : master_seed_(master_seed), stream_index_(stream_index) {
        std::uint64_t x = detail::mix64(master_seed) ^
                          detail::mix64(stream_index ^ 0x6A09E667F3BCC909ULL);
        for (auto& word : state_) {
            x += 0x9E3779B97F4A7C15ULL;
            word = detail::mix64(x);
        }
    }

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform on the open interval (0,1): 53 random bits, offset half a step.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (exactly two uniforms per call).
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Exponential with rate 1.
    double exponential() { return -std::log(uniform()); }

    /// Gamma with the given shape and unit scale. Marsaglia-Tsang acceptance
    /// (no squeeze step) for shape >= 1; the boost U^(1/shape) lifts shape < 1.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw std::invalid_argument("RngStream::gamma: shape must be > 0");
        if (shape < 1.0) {
            const double boost = std::pow(uniform(), 1.0 / shape);
            return gamma(shape + 1.0) * boost;
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            const double x = normal();
            const double t = 1.0 + c * x;
            if (t <= 0.0) continue;
            const double v = t * t * t;
            const double u = uniform();
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::uint64_t state_[4];
};

} // namespace footrule
