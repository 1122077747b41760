#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace superman {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Combines a seed with stream tags so that derived streams are independent
// of evaluation order (per sample, per epoch, per noise level, ...).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
    std::uint64_t s = seed;
    (void)splitmix64(s);
    s ^= a + 0x9e3779b97f4a7c15ULL;
    (void)splitmix64(s);
    s ^= b + 0xd1b54a32d192ed03ULL;
    (void)splitmix64(s);
    s ^= c + 0x8cb92ba72f3d8dd7ULL;
    return splitmix64(s);
}

// mt19937_64 with hand-rolled distributions. The engine's output sequence is
// fixed by the standard, and avoiding std::*_distribution keeps draws
// bit-reproducible across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t bits() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; the spare value is discarded so each call consumes exactly
    // two engine draws.
    double normal(double mean = 0.0, double stddev = 1.0) {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * M_PI * u2);
    }

    double exponential(double mean) {
        double u = uniform();
        if (u >= 1.0) u = 1.0 - 0x1.0p-53;
        return -mean * std::log1p(-u);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Uniform integer in [0, n).
    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    Rng split(std::uint64_t tag) { return Rng(mix_seed(engine_(), tag)); }

private:
    std::mt19937_64 engine_;
};

} // namespace superman
