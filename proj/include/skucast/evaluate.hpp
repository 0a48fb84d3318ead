#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "skucast/calendar.hpp"
#include "skucast/errors.hpp"
#include "skucast/simulate.hpp"

namespace skucast {

/// Floor on the SPL scale so constant in-sample series score finitely.
inline constexpr double kScaleFloor = 1e-9;

/// Standard quantile (pinball) loss.
inline double pinball(double y, double q, double tau) {
    return y >= q ? tau * (y - q) : (1.0 - tau) * (q - y);
}

/// Scaled pinball loss of one forecast: mean pinball loss over all days and
/// levels, divided by the in-sample mean absolute first difference.
inline double spl(std::span<const double> actuals, const QuantileForecast& qf,
                  std::span<const long long> insample) {
    if (actuals.size() != qf.horizon)
        throw data_error("spl: actuals length " + std::to_string(actuals.size()) +
                         " != forecast horizon " + std::to_string(qf.horizon));
    if (insample.size() < 2) throw data_error("spl: in-sample series too short to scale");

    double loss = 0.0;
    for (std::size_t t = 0; t < qf.horizon; ++t)
        for (std::size_t q = 0; q < qf.levels.size(); ++q)
            loss += pinball(actuals[t], qf.at(t, q), qf.levels[q]);
    loss /= static_cast<double>(qf.horizon * qf.levels.size());

    double scale = 0.0;
    for (std::size_t t = 1; t < insample.size(); ++t)
        scale += std::fabs(static_cast<double>(insample[t]) - static_cast<double>(insample[t - 1]));
    scale /= static_cast<double>(insample.size() - 1);
    return loss / std::max(scale, kScaleFloor);
}

struct SeriesScore {
    std::string id;
    int level = 0;
    double spl = 0.0;
    double weight = 0.0; ///< dollar sales over the last 28 in-sample days
};

/// Weighted SPL: weights are normalized to sum 1 within each level, and the
/// per-level weighted sums are averaged across levels.
inline double wspl(std::span<const SeriesScore> scores) {
    if (scores.empty()) throw data_error("wspl: no scores");
    std::map<int, double> level_weight;
    for (const SeriesScore& s : scores) level_weight[s.level] += s.weight;
    std::map<int, double> level_score;
    for (const SeriesScore& s : scores) {
        const double total = level_weight.at(s.level);
        const double w = total > 0.0 ? s.weight / total : 0.0;
        level_score[s.level] += w * s.spl;
    }
    double sum = 0.0;
    for (const auto& [level, score] : level_score) sum += score;
    return sum / static_cast<double>(level_score.size());
}

/// Per-level weighted SPL breakdown, same normalization as wspl.
inline std::map<int, double> wspl_by_level(std::span<const SeriesScore> scores) {
    std::map<int, double> level_weight;
    for (const SeriesScore& s : scores) level_weight[s.level] += s.weight;
    std::map<int, double> level_score;
    for (const SeriesScore& s : scores) {
        const double total = level_weight.at(s.level);
        level_score[s.level] += (total > 0.0 ? s.weight / total : 0.0) * s.spl;
    }
    return level_score;
}

enum class BaselineKind { naive, snaive };

/// Naive: empirical quantiles of historical one-step errors added to the
/// last observation, clamped at zero; constant across the horizon.
/// Seasonal naive: per-weekday empirical quantiles of the last eight
/// same-weekday observations, aligned to each future day's weekday via the
/// calendar (in-sample occupies the first insample.size() calendar days).
inline QuantileForecast baseline_quantiles(BaselineKind kind, std::span<const long long> insample,
                                           const CalendarTable& calendar, std::size_t horizon,
                                           std::span<const double> levels) {
    if (insample.size() < 2) throw data_error("baseline_quantiles: in-sample too short");
    QuantileForecast qf;
    qf.levels.assign(levels.begin(), levels.end());
    qf.horizon = horizon;
    qf.values.resize(horizon * levels.size());

    if (kind == BaselineKind::naive) {
        std::vector<double> errors(insample.size() - 1);
        for (std::size_t t = 1; t < insample.size(); ++t)
            errors[t - 1] = static_cast<double>(insample[t]) - static_cast<double>(insample[t - 1]);
        std::sort(errors.begin(), errors.end());
        const double last = static_cast<double>(insample.back());
        for (std::size_t q = 0; q < levels.size(); ++q) {
            const double value = std::max(0.0, last + nearest_rank(errors, levels[q]));
            for (std::size_t t = 0; t < horizon; ++t) qf.values[t * levels.size() + q] = value;
        }
        return qf;
    }

    if (calendar.size() < insample.size() + horizon)
        throw data_error("baseline_quantiles: calendar shorter than history plus horizon");
    std::array<std::vector<double>, 7> by_weekday;
    for (std::size_t t = 0; t < insample.size(); ++t)
        by_weekday[static_cast<std::size_t>(calendar.days[t].weekday)]
            .push_back(static_cast<double>(insample[t]));
    for (auto& obs : by_weekday) {
        if (obs.size() > 8) obs.erase(obs.begin(), obs.end() - 8);
        std::sort(obs.begin(), obs.end());
    }
    for (std::size_t t = 0; t < horizon; ++t) {
        const int wd = calendar.days[insample.size() + t].weekday;
        const std::vector<double>& obs = by_weekday[static_cast<std::size_t>(wd)];
        for (std::size_t q = 0; q < levels.size(); ++q) {
            const double value =
                obs.empty() ? static_cast<double>(insample.back()) : nearest_rank(obs, levels[q]);
            qf.values[t * levels.size() + q] = value;
        }
    }
    return qf;
}

} // namespace skucast
