#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace hsv {

// Counter-based sub-seed derivation: sub-seed i of a master seed is the
// i-th output of the splitmix64 sequence started at the master seed.
// The mixing function is a bijection on 64-bit words and the counter
// stride is odd, so the map index -> sub-seed is injective for a fixed
// master seed. Fixed published constants; identical on every platform.
uint64_t splitmix64_mix(uint64_t z);
uint64_t derive_seed(uint64_t master, uint64_t index);

// Deterministic RNG wrapper. std::mt19937_64 output is pinned by the
// standard; std::*_distribution is not, so sampling here uses explicit
// constructions on raw engine words only.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}
    static Rng derived(uint64_t master, uint64_t index) {
        return Rng(derive_seed(master, index));
    }

    uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double next_unit() { return (engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_unit() < p; }

    // Uniform in [0, n) by rejection; n > 0.
    uint64_t below(uint64_t n);

    // In-place Fisher-Yates; stable across platforms (std::shuffle is not).
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

// exp(-2 eps^2 k / r^2); throws std::invalid_argument unless
// eps > 0, r > 0, k > 0.
double hoeffding_tail(double eps, double r, uint64_t k);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson score interval for a binomial proportion. confidence in (0, 1),
// trials > 0. Prefers Wilson over the normal approximation because the
// protocol experiments sit at extreme rates (near 0 and near 1) where the
// normal interval escapes [0, 1].
Interval wilson_interval(uint64_t successes, uint64_t trials, double confidence);

struct FrequencyEstimate {
    uint64_t successes = 0;
    uint64_t trials = 0;
    double point = 0.0;
    Interval wilson95;
};

FrequencyEstimate make_frequency_estimate(uint64_t successes, uint64_t trials);

// Two-sided standard normal quantile via Newton iterations on erf;
// z for 95% is 1.95996398454...
double normal_quantile_two_sided(double confidence);

}  // namespace hsv
