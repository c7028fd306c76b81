#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace impactis::rng {

/// Deterministic sampling kit on top of std::mt19937_64, whose output
/// sequence is fixed by the standard. All samplers are hand-rolled so the
/// stream never depends on standard-library distribution internals:
/// identical seeds give identical draws on every platform.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double u01();

    /// Standard normal (Marsaglia polar).
    double normal();

    /// Gamma(shape, scale), Marsaglia-Tsang; shape < 1 via the boost step.
    double gamma(double shape, double scale);

    std::int64_t poisson(double mean);

    /// Gamma-Poisson mixture: Poisson(Gamma(dispersion, mean/dispersion)).
    /// Smaller dispersion = heavier tail; variance = mean + mean^2/dispersion.
    std::int64_t negative_binomial(double mean, double dispersion);

    std::int64_t binomial(std::int64_t trials, double p);

    /// Index into a cumulative weight vector (see cumulative()).
    std::size_t pick(const std::vector<double>& cumulative_weights);

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Prefix sums for Sampler::pick. Weights must be nonnegative with a
/// positive total.
std::vector<double> cumulative(const std::vector<double>& weights);

}  // namespace impactis::rng
