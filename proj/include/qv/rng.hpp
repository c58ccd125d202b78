#pragma once

#include <cstdint>
#include <random>

#include "qv/common.hpp"

namespace qv {

// splitmix64 step; used to whiten seeds and derive independent child streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic random source. Children are derived from the construction
// seed, not from the parent's consumption state, so per-item streams stay
// reproducible regardless of evaluation order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    Rng child(std::uint64_t stream) const {
        return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x632BE59BD9B4E019ULL)));
    }

    std::uint64_t next_u64() { return engine_(); }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    double normal() { return normal_(engine_); }

    // standard complex normal, E|g|^2 = 1
    Complex complex_normal() {
        const double inv_sqrt2 = 0.70710678118654752440;
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return Complex{re * inv_sqrt2, im * inv_sqrt2};
    }

    long long poisson(double mean) {
        if (!(mean > 0.0)) return 0;
        return std::poisson_distribution<long long>(mean)(engine_);
    }

    long long binomial(long long n, double p) {
        if (n <= 0 || !(p > 0.0)) return 0;
        if (p >= 1.0) return n;
        return std::binomial_distribution<long long>(n, p)(engine_);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace qv
