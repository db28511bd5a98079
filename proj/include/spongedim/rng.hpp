#ifndef SPONGEDIM_RNG_HPP
#define SPONGEDIM_RNG_HPP

#include <cmath>
#include <cstdint>

#include "common.hpp"

namespace spongedim {

// Counter-based generator: stream(seed, counter) is a pure function, so
// parallel workers draw from non-overlapping streams regardless of
// scheduling, and every result is reproducible from (seed, counter) alone.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    // The state walk advances by the same odd constant for every stream, so
    // the offset between two streams must be avalanched: seeding with
    // seed ^ (c * stream) leaves nearby streams on overlapping walks (their
    // trajectories are shifts of each other), which correlates "independent"
    // samples.  Running (seed, stream) through the full output mix first
    // places each stream at an unrelated point of the walk.
    SplitMix64(std::uint64_t seed, std::uint64_t stream) : state(0) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        state = z ^ (z >> 31);
    }

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1).
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    int uniform_int(int n) { return int(next() % std::uint64_t(n)); }

    // Standard exponential via inversion (uniform() < 1 always).
    double exponential() { return -std::log1p(-uniform()); }

    // Dirichlet(1,...,1): uniform on the simplex.
    Vec dirichlet(std::size_t n) {
        Vec v(n);
        double s = 0.0;
        for (auto& x : v) s += (x = exponential());
        for (auto& x : v) x /= s;
        return v;
    }

    // Discrete draw from a probability vector.
    std::size_t categorical(const Vec& p) {
        double u = uniform();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            acc += p[i];
            if (u < acc) return i;
        }
        return p.size() - 1;
    }
};

}  // namespace spongedim

#endif
