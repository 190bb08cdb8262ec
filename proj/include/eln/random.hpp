#ifndef ELN_RANDOM_HPP
#define ELN_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace eln {

// Seeded generator used by every sampler in the library. Normal variates
// come from a Box-Muller transform over the raw 64-bit stream so results
// are reproducible across standard-library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform double in [0, 1)
    double uniform() {
        return std::generate_canonical<double, 53>(gen_);
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // integer in [0, n)
    std::uint64_t uniform_index(std::uint64_t n) {
        std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
        return dist(gen_);
    }

    // standard normal via Box-Muller; two uniforms consumed per call
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double two_pi = 2.0 * 3.14159265358979323846;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    double normal(double mean, double stddev) {
        return mean + stddev * normal();
    }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

// Stable seed derivation for independent sub-streams (grid point x fold,
// run index, ...). SplitMix64 finalizer over the combined words.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (a + 1) + 0xbf58476d1ce4e5b9ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace eln

#endif
