#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace netrates {

// Derives an independent substream seed from a master seed and an index.
// splitmix64 finalizer; good avalanche, cheap.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seeded PRNG with fully specified draw algorithms. All variates are
// produced from the raw mt19937_64 word stream by inverse transform or
// rejection, never through std:: distribution objects, so a seed pins
// the exact sequence independent of the standard library in use.
class Rng {
public:
    // Versioned identifier recorded in trajectory files.
    static constexpr const char* kAlgorithm = "mt19937_64-v1";

    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_word() { return eng_(); }

    // Uniform on [0,1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(next_word() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    // Strictly positive exponential variate via inverse transform.
    double exponential(double rate) {
        for (;;) {
            const double t = -std::log1p(-uniform01()) / rate;
            if (t > 0.0) return t;
        }
    }

    // Unbiased integer on [0, m), m >= 1, by scaled rejection.
    std::uint64_t uniform_int(std::uint64_t m) {
        const std::uint64_t scaling = UINT64_MAX / m;
        const std::uint64_t past = m * scaling;
        std::uint64_t x;
        do {
            x = next_word();
        } while (x >= past);
        return x / scaling;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace netrates
