#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "skucast/errors.hpp"
#include "skucast/issm.hpp"
#include "skucast/negbin.hpp"
#include "skucast/rng.hpp"

namespace skucast {

/// The nine competition quantile levels (median plus the 50%, 67%, 95% and
/// 99% central prediction intervals).
inline const std::vector<double> kDefaultQuantileLevels = {0.005, 0.025, 0.165, 0.25, 0.5,
                                                           0.75,  0.835, 0.975, 0.995};

/// U simulated sample paths of length H for one series; row-major U x H.
struct TrajectorySet {
    std::size_t num_trajectories = 0; ///< U
    std::size_t horizon = 0;          ///< H
    std::vector<long long> samples;   ///< U * H, trajectory-major
    std::uint64_t master_seed = 0;
    std::string series_id;

    long long at(std::size_t u, std::size_t t) const { return samples[u * horizon + t]; }
    long long& at(std::size_t u, std::size_t t) { return samples[u * horizon + t]; }
};

/// Per-day quantile grid, rows non-decreasing across levels.
struct QuantileForecast {
    std::vector<double> levels;      ///< strictly increasing in (0, 1)
    std::size_t horizon = 0;
    std::vector<double> values;      ///< horizon x levels.size(), day-major

    double at(std::size_t day, std::size_t level_idx) const {
        return values[day * levels.size() + level_idx];
    }
};

/// Simulates U trajectories from the fitted model's final state: each step
/// draws y ~ Nb(z * l, theta) and updates z = z - (z - y / l) * alpha.
/// Trajectory u draws from a stream derived from (master_seed, series id,
/// u), so output is reproducible and independent of execution order.
inline TrajectorySet generate_trajectories(const FittedModel& model,
                                           std::span<const double> l_future,
                                           std::size_t num_trajectories,
                                           std::uint64_t master_seed,
                                           const std::string& series_id = {}) {
    if (l_future.empty()) throw data_error("generate_trajectories: empty future amplitude");
    if (num_trajectories == 0) throw data_error("generate_trajectories: U must be >= 1");
    for (double l : l_future)
        if (!(l > 0.0)) throw data_error("generate_trajectories: amplitude must be positive");

    TrajectorySet out;
    out.num_trajectories = num_trajectories;
    out.horizon = l_future.size();
    out.samples.resize(num_trajectories * l_future.size());
    out.master_seed = master_seed;
    out.series_id = series_id;

    const double theta = std::max(model.theta, kThetaFloor);
    const std::uint64_t key = hash_id(series_id);
    for (std::size_t u = 0; u < num_trajectories; ++u) {
        RandomStream rng = make_stream(master_seed, key, u);
        double z = model.z_final;
        for (std::size_t t = 0; t < l_future.size(); ++t) {
            const double lambda = std::max(z * l_future[t], kLambdaFloor);
            const long long y = nb_sample({lambda, theta}, rng);
            out.at(u, t) = y;
            z = z - (z - static_cast<double>(y) / l_future[t]) * model.alpha;
        }
    }
    return out;
}

/// Empirical pmf of the simulated demand on one day (1-based); sums to
/// exactly 1 by construction.
inline std::map<long long, double> empirical_distribution(const TrajectorySet& ts, std::size_t day) {
    if (day < 1 || day > ts.horizon)
        throw data_error("empirical_distribution: day out of range 1.." + std::to_string(ts.horizon));
    std::map<long long, double> pmf;
    const double w = 1.0 / static_cast<double>(ts.num_trajectories);
    for (std::size_t u = 0; u < ts.num_trajectories; ++u) pmf[ts.at(u, day - 1)] += w;
    return pmf;
}

/// Higher nearest-rank quantile of pre-sorted data: element ceil(tau * n),
/// 1-based, clamped to [1, n].
inline double nearest_rank(std::span<const double> sorted, double tau) {
    const auto n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(tau * n));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

/// Per-day higher nearest-rank quantiles of the simulated samples.
inline QuantileForecast extract_quantiles(const TrajectorySet& ts,
                                          std::span<const double> levels) {
    if (ts.num_trajectories == 0 || ts.samples.empty())
        throw data_error("extract_quantiles: empty trajectory set");
    QuantileForecast qf;
    qf.levels.assign(levels.begin(), levels.end());
    qf.horizon = ts.horizon;
    qf.values.resize(ts.horizon * levels.size());
    std::vector<double> day_samples(ts.num_trajectories);
    for (std::size_t t = 0; t < ts.horizon; ++t) {
        for (std::size_t u = 0; u < ts.num_trajectories; ++u)
            day_samples[u] = static_cast<double>(ts.at(u, t));
        std::sort(day_samples.begin(), day_samples.end());
        for (std::size_t q = 0; q < levels.size(); ++q)
            qf.values[t * levels.size() + q] = nearest_rank(day_samples, levels[q]);
    }
    return qf;
}

inline QuantileForecast extract_quantiles(const TrajectorySet& ts) {
    return extract_quantiles(ts, kDefaultQuantileLevels);
}

} // namespace skucast
