#pragma once

#include <cmath>
#include <cstdint>

namespace slseng {

// xoshiro256++ with splitmix64 key expansion. Streams are keyed by
// (seed, stream, index) so realization i depends only on those three
// values, never on worker count or evaluation order.
class Rng {
public:
    Rng() : Rng(0x9e3779b97f4a7c15ULL, 0, 0) {}

    Rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
        std::uint64_t x = seed;
        x ^= 0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL;
        x ^= 0xbb67ae8584caa73bULL + index * 0xc2b2ae3d27d4eb4fULL;
        for (auto& w : state_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            w = z ^ (z >> 31);
        }
    }

    std::uint64_t next() {
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

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform in [0, 2*pi)
    double uniform_angle() { return uniform() * 6.283185307179586476925; }

    // exp(1) power fading coefficient
    double exp1() { return -std::log1p(-uniform()); }

    // Poisson(mean) by chunked Knuth multiplication; exact for the means
    // used here (the per-chunk floor keeps exp(-chunk) well above DBL_MIN).
    std::uint64_t poisson(double mean) {
        std::uint64_t total = 0;
        while (mean > 0.0) {
            const double chunk = mean > 500.0 ? 500.0 : mean;
            mean -= chunk;
            const double limit = std::exp(-chunk);
            double prod = uniform();
            while (prod >= limit) {
                ++total;
                prod *= uniform();
            }
        }
        return total;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

}  // namespace slseng
