#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "skucast/rng.hpp"

namespace skucast {

/// Smallest admissible over-dispersion; keeps the distribution well-defined
/// when upstream code would otherwise drive theta to the Poisson limit.
inline constexpr double kThetaFloor = 1e-6;

/// Negative binomial parameterized by mean and over-dispersion index:
/// mean = lambda, variance = lambda * (theta + 1).
struct NbParams {
    double lambda; ///< mean, items/day
    double theta;  ///< over-dispersion index, dimensionless
};

inline void validate(const NbParams& p) {
    if (!(std::isfinite(p.lambda) && p.lambda > 0.0))
        throw std::invalid_argument("NbParams: lambda must be finite and > 0, got " +
                                    std::to_string(p.lambda));
    if (!(std::isfinite(p.theta) && p.theta > 0.0))
        throw std::invalid_argument("NbParams: theta must be finite and > 0, got " +
                                    std::to_string(p.theta));
}

/// lgamma(r + k) - lgamma(r) for integer k >= 0. Small k is evaluated as a
/// log product, which is both faster and exact for k = 0.
inline double log_gamma_ratio(double r, long long k) {
    if (k == 0) return 0.0;
    if (k <= 12) {
        double s = 0.0;
        for (long long j = 0; j < k; ++j) s += std::log(r + static_cast<double>(j));
        return s;
    }
    return std::lgamma(r + static_cast<double>(k)) - std::lgamma(r);
}

/// log Pr(X = k | lambda, theta) for the mean/over-dispersion negative
/// binomial pmf
///   Gamma(r + k) / (Gamma(r) k!) * (1/(1+theta))^r * (theta/(1+theta))^k,
/// with r = lambda / theta.
inline double nb_log_pmf(long long k, const NbParams& p) {
    validate(p);
    if (k < 0) throw std::invalid_argument("nb_log_pmf: k must be >= 0");
    const double r = p.lambda / p.theta;
    return log_gamma_ratio(r, k) - std::lgamma(static_cast<double>(k) + 1.0) -
           r * std::log1p(p.theta) - static_cast<double>(k) * std::log1p(1.0 / p.theta);
}

inline double nb_pmf(long long k, const NbParams& p) {
    return std::exp(nb_log_pmf(k, p));
}

struct NbMoments {
    double mean;
    double variance;
};

inline NbMoments nb_moments(const NbParams& p) {
    validate(p);
    return {p.lambda, p.lambda * (p.theta + 1.0)};
}

/// Draws one sample via the Gamma-Poisson mixture:
/// rate ~ Gamma(shape = lambda/theta, scale = theta), then Poisson(rate).
template <class Rng>
long long nb_sample(const NbParams& p, Rng& rng) {
    validate(p);
    std::gamma_distribution<double> gamma(p.lambda / p.theta, p.theta);
    const double rate = gamma(rng);
    if (!(rate > 0.0)) return 0; // gamma underflow for tiny shapes
    std::poisson_distribution<long long> poisson(rate);
    return poisson(rng);
}

} // namespace skucast
