#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <tuple>
#include <vector>

#include "skucast/errors.hpp"
#include "skucast/negbin.hpp"

namespace skucast {

/// Floor on every emission mean, preventing log(0) when the state or the
/// amplitude underflows.
inline constexpr double kLambdaFloor = 1e-9;

/// Learned parameters of the exponential-smoothing negative-binomial model
/// for one series, plus the smoothed state after the last observation.
struct FittedModel {
    double alpha = 0.0;       ///< smoothing factor in [0, 1]
    double theta = kThetaFloor;
    double z_seed = 1.0;      ///< state initializer (de-seasonalised level)
    double z_final = 1.0;     ///< state after consuming the full history
    double neg_log_lik = 0.0;
};

struct Recursion {
    std::vector<double> lambda; ///< per-day emission mean, length T
    double z_final = 0.0;       ///< z_{T+1}
};

/// Runs the level recursion z_{t+1} = alpha * y_t / l_t + (1 - alpha) * z_t
/// from z_1 = z_seed and emits lambda_t = z_t * l_t (floored).
inline Recursion state_recursion(std::span<const long long> y, std::span<const double> l,
                                 double alpha, double z_seed) {
    if (y.size() != l.size())
        throw data_error("state_recursion: series length " + std::to_string(y.size()) +
                         " != amplitude length " + std::to_string(l.size()));
    Recursion out;
    out.lambda.resize(y.size());
    double z = z_seed;
    for (std::size_t t = 0; t < y.size(); ++t) {
        out.lambda[t] = std::max(z * l[t], kLambdaFloor);
        z = alpha * static_cast<double>(y[t]) / l[t] + (1.0 - alpha) * z;
    }
    out.z_final = z;
    return out;
}

namespace detail {

/// Negative log-likelihood given precomputed emission means. Shared by
/// log_likelihood and fit so both accumulate in the identical order.
inline double nb_nll_for_lambda(std::span<const long long> y, std::span<const double> lambda,
                                double theta, std::span<const double> lgamma_y1) {
    const double log1p_theta = std::log1p(theta);
    const double log1p_inv_theta = std::log1p(1.0 / theta);
    double nll = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        const double r = lambda[t] / theta;
        const double log_pmf = log_gamma_ratio(r, y[t]) - lgamma_y1[t] - r * log1p_theta -
                               static_cast<double>(y[t]) * log1p_inv_theta;
        nll -= log_pmf;
    }
    return nll;
}

inline std::vector<double> lgamma_y_plus_1(std::span<const long long> y) {
    std::vector<double> out(y.size());
    for (std::size_t t = 0; t < y.size(); ++t)
        out[t] = std::lgamma(static_cast<double>(y[t]) + 1.0);
    return out;
}

} // namespace detail

/// Sum over t of the negative-binomial log pmf of y_t at mean lambda_t from
/// the state recursion and shared over-dispersion theta.
inline double log_likelihood(std::span<const long long> y, std::span<const double> l,
                             double alpha, double theta, double z_seed) {
    const Recursion rec = state_recursion(y, l, alpha, z_seed);
    const std::vector<double> lg = detail::lgamma_y_plus_1(y);
    return -detail::nb_nll_for_lambda(y, rec.lambda, theta, lg);
}

/// Cartesian parameter grid. Empty z_seeds means: derive them from the data
/// as log-spaced points bracketing the mean de-seasonalised level.
struct GridSpec {
    std::vector<double> alphas;
    std::vector<double> thetas;
    std::vector<double> z_seeds;

    static std::vector<double> log_spaced(double lo, double hi, std::size_t n) {
        std::vector<double> out(n);
        if (n == 1) {
            out[0] = lo;
            return out;
        }
        const double step = (std::log(hi) - std::log(lo)) / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(std::log(lo) + step * static_cast<double>(i));
        return out;
    }

    static GridSpec defaults() {
        GridSpec g;
        g.alphas.resize(51);
        for (std::size_t i = 0; i < g.alphas.size(); ++i) g.alphas[i] = 0.02 * static_cast<double>(i);
        g.alphas.back() = 1.0;
        g.thetas = log_spaced(0.01, 10.0, 24);
        return g;
    }

    std::vector<double> resolve_z_seeds(std::span<const long long> y,
                                        std::span<const double> l) const {
        if (!z_seeds.empty()) return z_seeds;
        double m = 0.0;
        for (std::size_t t = 0; t < y.size(); ++t) m += static_cast<double>(y[t]) / l[t];
        m /= static_cast<double>(y.size());
        const double lo = std::max(0.01, m / 8.0);
        const double hi = std::max(0.02, 8.0 * m);
        return log_spaced(lo, hi, 16);
    }
};

/// Exhaustive grid-search maximum likelihood over (alpha, theta, z_seed).
/// Ties break toward smaller alpha, then theta, then z_seed.
inline FittedModel fit(std::span<const long long> y, std::span<const double> l,
                       const GridSpec& grid) {
    if (y.empty()) throw data_error("fit: empty series");
    if (y.size() != l.size()) throw data_error("fit: series/amplitude length mismatch");
    if (grid.alphas.empty() || grid.thetas.empty()) throw config_error("fit: empty grid");

    std::vector<double> alphas = grid.alphas;
    std::vector<double> thetas = grid.thetas;
    std::vector<double> z_seeds = grid.resolve_z_seeds(y, l);
    std::sort(alphas.begin(), alphas.end());
    std::sort(thetas.begin(), thetas.end());
    std::sort(z_seeds.begin(), z_seeds.end());
    for (double& th : thetas) th = std::max(th, kThetaFloor);

    const std::vector<double> lg = detail::lgamma_y_plus_1(y);

    FittedModel best;
    bool have_best = false;
    for (double alpha : alphas) {
        for (double z0 : z_seeds) {
            const Recursion rec = state_recursion(y, l, alpha, z0);
            for (double theta : thetas) {
                const double nll = detail::nb_nll_for_lambda(y, rec.lambda, theta, lg);
                const bool better =
                    !have_best || nll < best.neg_log_lik ||
                    (nll == best.neg_log_lik &&
                     std::tie(alpha, theta, z0) < std::tie(best.alpha, best.theta, best.z_seed));
                if (better) {
                    best = {alpha, theta, z0, rec.z_final, nll};
                    have_best = true;
                }
            }
        }
    }
    return best;
}

} // namespace skucast
