#include "impactis/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace impactis::rng {

double Sampler::u01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Sampler::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * u01() - 1.0;
        v = 2.0 * u01() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
}

double Sampler::gamma(double shape, double scale) {
    if (shape <= 0.0 || scale <= 0.0) {
        throw std::invalid_argument("gamma requires positive shape and scale");
    }
    if (shape < 1.0) {
        const double u = u01();
        return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = u01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

std::int64_t Sampler::poisson(double mean) {
    if (mean < 0.0) throw std::invalid_argument("poisson requires mean >= 0");
    if (mean == 0.0) return 0;
    // Split large means; Poisson additivity keeps the distribution exact
    // while the product below stays clear of underflow.
    std::int64_t total = 0;
    while (mean > 60.0) {
        const double half = mean / 2.0;
        total += poisson(half);
        mean -= half;
    }
    const double limit = std::exp(-mean);
    double product = u01();
    std::int64_t count = 0;
    while (product > limit) {
        ++count;
        product *= u01();
    }
    return total + count;
}

std::int64_t Sampler::negative_binomial(double mean, double dispersion) {
    if (mean < 0.0 || dispersion <= 0.0) {
        throw std::invalid_argument("negative_binomial requires mean >= 0, dispersion > 0");
    }
    if (mean == 0.0) return 0;
    return poisson(gamma(dispersion, mean / dispersion));
}

std::int64_t Sampler::binomial(std::int64_t trials, double p) {
    if (trials < 0 || p < 0.0 || p > 1.0) {
        throw std::invalid_argument("binomial requires trials >= 0 and p in [0,1]");
    }
    std::int64_t successes = 0;
    for (std::int64_t i = 0; i < trials; ++i) {
        if (u01() < p) ++successes;
    }
    return successes;
}

std::size_t Sampler::pick(const std::vector<double>& cumulative_weights) {
    if (cumulative_weights.empty()) throw std::invalid_argument("pick from empty weights");
    const double total = cumulative_weights.back();
    const double needle = u01() * total;
    const auto it = std::upper_bound(cumulative_weights.begin(),
                                     cumulative_weights.end(), needle);
    const std::size_t idx = static_cast<std::size_t>(it - cumulative_weights.begin());
    return std::min(idx, cumulative_weights.size() - 1);
}

std::vector<double> cumulative(const std::vector<double>& weights) {
    std::vector<double> out;
    out.reserve(weights.size());
    double running = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("negative weight");
        running += w;
        out.push_back(running);
    }
    if (out.empty() || out.back() <= 0.0) {
        throw std::invalid_argument("weights must have a positive total");
    }
    return out;
}

}  // namespace impactis::rng
