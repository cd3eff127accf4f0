#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace pcode {

// Deterministic random source. All randomized entry points take an explicit
// seed; restart k of a multi-restart solver derives its stream as
// derive_seed(seed, k), so restarts can run in any order (or in parallel)
// without changing results.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() {
        // 53-bit mantissa uniform in [0, 1)
        return (gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller. Not std::normal_distribution, whose sequence is
    // implementation-defined.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    std::uint64_t bits() { return gen_(); }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t counter) {
    // splitmix64 step on seed + golden-ratio stride
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (counter + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace pcode
