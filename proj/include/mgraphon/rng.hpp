#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mgraphon {

// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
}

// Seed for the stream identified by (master, tag, index). Streams with
// different tags or indices are independent, so work can be distributed
// over workers without changing results.
inline std::uint64_t stream_seed(std::uint64_t master, std::string_view tag,
                                 std::uint64_t index = 0) {
    std::uint64_t h = mix64(master);
    for (unsigned char c : tag) h = hash_combine(h, c);
    return hash_combine(h, index);
}

// Deterministic RNG stream. Distributions are hand-rolled on top of the
// fully-specified mt19937_64 output so results do not depend on the
// standard library implementation.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : eng_(mix64(seed)) {}
    RngStream(std::uint64_t master, std::string_view tag, std::uint64_t index = 0)
        : eng_(stream_seed(master, tag, index)) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Box-Muller; consumes two uniforms per call.
    double normal(double mean = 0.0, double sd = 1.0) {
        double u1 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double two_pi = 6.283185307179586476925286766559;
        return mean + sd * r * std::cos(two_pi * u2);
    }

    // uniform integer in [0, bound), unbiased
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do { v = eng_(); } while (v >= limit);
        return v % bound;
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace mgraphon
