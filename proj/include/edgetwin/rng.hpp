#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace edgetwin {

// splitmix64; used to derive independent substreams from one scenario seed.
inline std::uint64_t split_mix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t key) {
    std::uint64_t s = seed ^ (0x51a2b3c4d5e6f708ULL + key * 0x9e3779b97f4a7c15ULL);
    split_mix64(s);
    return split_mix64(s);
}

// mt19937_64 plus hand-rolled distributions. The std:: distributions are
// implementation-defined, so generated streams would change across standard
// libraries; these keep scenario generation a pure function of the seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [lo, hi] inclusive
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(bounded(span));
    }

    // standard normal via Box-Muller (no cached spare: two draws per call)
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    double lognormal(double log_mean, double log_sigma) {
        return std::exp(log_mean + log_sigma * normal());
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    // Lemire-style bounded draw without modulo bias
    std::uint64_t bounded(std::uint64_t n) {
        if (n == 0) return engine_();
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % n;
        }
    }

    std::mt19937_64 engine_;
};

}  // namespace edgetwin
