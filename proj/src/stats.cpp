#include "hsv/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace hsv {

uint64_t splitmix64_mix(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

uint64_t derive_seed(uint64_t master, uint64_t index) {
    return splitmix64_mix(master + 0x9E3779B97F4A7C15ull * (index + 1));
}

uint64_t Rng::below(uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    // Rejection from the top keeps the draw unbiased.
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double hoeffding_tail(double eps, double r, uint64_t k) {
    if (!(eps > 0.0) || !(r > 0.0) || k == 0)
        throw std::invalid_argument("hoeffding_tail: eps, r, k must be positive");
    return std::exp(-2.0 * eps * eps * static_cast<double>(k) / (r * r));
}

double normal_quantile_two_sided(double confidence) {
    if (!(confidence > 0.0) || !(confidence < 1.0))
        throw std::invalid_argument("normal_quantile_two_sided: confidence must be in (0,1)");
    // Solve erf(z/sqrt(2)) = confidence by Newton iteration; erf is
    // monotone and smooth so a handful of steps from a crude start
    // reaches double precision.
    double target = confidence;
    double x = 1.0;
    for (int it = 0; it < 60; ++it) {
        double f = std::erf(x) - target;
        double df = 2.0 / std::sqrt(M_PI) * std::exp(-x * x);
        double step = f / df;
        x -= step;
        if (std::abs(step) < 1e-15) break;
    }
    return x * std::sqrt(2.0);
}

Interval wilson_interval(uint64_t successes, uint64_t trials, double confidence) {
    if (trials == 0) throw std::invalid_argument("wilson_interval: trials must be positive");
    if (successes > trials)
        throw std::invalid_argument("wilson_interval: successes exceed trials");
    double z = normal_quantile_two_sided(confidence);
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {center - half, center + half};
}

FrequencyEstimate make_frequency_estimate(uint64_t successes, uint64_t trials) {
    FrequencyEstimate est;
    est.successes = successes;
    est.trials = trials;
    est.point = trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
    est.wilson95 = wilson_interval(successes, trials, 0.95);
    return est;
}

}  // namespace hsv
