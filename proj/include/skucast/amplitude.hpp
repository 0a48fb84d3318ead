#pragma once

#include <array>
#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "skucast/calendar.hpp"
#include "skucast/errors.hpp"

namespace skucast {

/// Floor applied to every estimated factor, modulating vanishing forecasts.
inline constexpr double kFactorFloor = 0.01;

enum class CalendarFeature { day_of_week, day_of_month, month_of_year, event };

/// Multiplicative calendar factors estimated at one aggregation node and
/// shared by all of its bottom-level descendants. Day-of-month slots hit by
/// SNAP disbursement carry a separate factor used on SNAP-flagged dates.
struct FactorMap {
    std::array<double, 7> day_of_week{};
    std::array<double, 31> day_of_month{};
    std::array<double, 31> day_of_month_snap{}; ///< used when the date is SNAP-flagged
    std::array<double, 12> month_of_year{};
    std::map<std::string, double> event;

    FactorMap() {
        day_of_week.fill(1.0);
        day_of_month.fill(1.0);
        day_of_month_snap.fill(1.0);
        month_of_year.fill(1.0);
    }
};

namespace detail {

inline double floored_ratio(double feature_mean, double global_mean) {
    const double f = feature_mean / global_mean;
    return f < kFactorFloor ? kFactorFloor : f;
}

inline int feature_value(const CalendarDay& day, CalendarFeature feature) {
    switch (feature) {
        case CalendarFeature::day_of_week: return day.weekday;
        case CalendarFeature::day_of_month: return day.day_of_month - 1;
        case CalendarFeature::month_of_year: return day.month - 1;
        default: return -1;
    }
}

inline std::size_t feature_cardinality(CalendarFeature feature) {
    switch (feature) {
        case CalendarFeature::day_of_week: return 7;
        case CalendarFeature::day_of_month: return 31;
        case CalendarFeature::month_of_year: return 12;
        default: return 0;
    }
}

} // namespace detail

/// Ratio of mean sales on days carrying each feature value to the global
/// mean over the whole history, floored at 0.01. Feature values never
/// observed in the history keep factor 1. A zero global mean yields all 1s.
inline std::vector<double> estimate_factor(std::span<const long long> agg_series,
                                           const CalendarTable& calendar,
                                           CalendarFeature feature) {
    if (agg_series.empty()) throw data_error("estimate_factor: empty series");
    if (calendar.size() < agg_series.size())
        throw data_error("estimate_factor: calendar shorter than series history");
    const std::size_t cardinality = detail::feature_cardinality(feature);
    if (cardinality == 0) throw data_error("estimate_factor: unknown feature kind");

    std::vector<double> sums(cardinality, 0.0);
    std::vector<std::size_t> counts(cardinality, 0);
    double total = 0.0;
    for (std::size_t t = 0; t < agg_series.size(); ++t) {
        const int v = detail::feature_value(calendar.days[t], feature);
        sums[static_cast<std::size_t>(v)] += static_cast<double>(agg_series[t]);
        ++counts[static_cast<std::size_t>(v)];
        total += static_cast<double>(agg_series[t]);
    }
    const double global_mean = total / static_cast<double>(agg_series.size());

    std::vector<double> factors(cardinality, 1.0);
    if (global_mean <= 0.0) return factors;
    for (std::size_t v = 0; v < cardinality; ++v)
        if (counts[v] > 0)
            factors[v] = detail::floored_ratio(sums[v] / static_cast<double>(counts[v]), global_mean);
    return factors;
}

/// Per-event factor: mean sales over the event's past occurrences relative
/// to the global mean, floored at 0.01. Events named in the calendar but
/// never observed in the history get factor 1.
inline std::map<std::string, double> estimate_event_factors(std::span<const long long> agg_series,
                                                            const CalendarTable& calendar) {
    if (calendar.size() < agg_series.size())
        throw data_error("estimate_event_factors: calendar shorter than series history");
    std::map<std::string, double> sums;
    std::map<std::string, std::size_t> counts;
    for (const CalendarDay& day : calendar.days)
        for (const std::string& ev : day.events) {
            sums.emplace(ev, 0.0);
            counts.emplace(ev, 0);
        }

    double total = 0.0;
    for (std::size_t t = 0; t < agg_series.size(); ++t) {
        total += static_cast<double>(agg_series[t]);
        for (const std::string& ev : calendar.days[t].events) {
            sums[ev] += static_cast<double>(agg_series[t]);
            ++counts[ev];
        }
    }
    const double global_mean =
        agg_series.empty() ? 0.0 : total / static_cast<double>(agg_series.size());

    std::map<std::string, double> factors;
    for (const auto& [name, sum] : sums) {
        const std::size_t n = counts[name];
        if (n == 0 || global_mean <= 0.0)
            factors[name] = 1.0;
        else
            factors[name] = detail::floored_ratio(sum / static_cast<double>(n), global_mean);
    }
    return factors;
}

/// Estimates the full factor map for one aggregation node. When the node
/// lies within a single SNAP-tracked state, day-of-month slots on that
/// state's SNAP days are estimated separately for flagged and unflagged
/// dates; otherwise plain day-of-month factors apply.
inline FactorMap estimate_factor_map(std::span<const long long> agg_series,
                                     const CalendarTable& calendar,
                                     const std::string& state = {}) {
    FactorMap map;
    auto dow = estimate_factor(agg_series, calendar, CalendarFeature::day_of_week);
    auto dom = estimate_factor(agg_series, calendar, CalendarFeature::day_of_month);
    auto moy = estimate_factor(agg_series, calendar, CalendarFeature::month_of_year);
    std::copy(dow.begin(), dow.end(), map.day_of_week.begin());
    std::copy(dom.begin(), dom.end(), map.day_of_month.begin());
    std::copy(dom.begin(), dom.end(), map.day_of_month_snap.begin());
    std::copy(moy.begin(), moy.end(), map.month_of_year.begin());
    map.event = estimate_event_factors(agg_series, calendar);

    const int state_idx = calendar.snap_state_index(state);
    if (state_idx >= 0) {
        double total = 0.0;
        for (long long y : agg_series) total += static_cast<double>(y);
        const double global_mean = total / static_cast<double>(agg_series.size());
        if (global_mean > 0.0) {
            for (int slot : snap_impact_days(state)) {
                double sum_on = 0.0, sum_off = 0.0;
                std::size_t n_on = 0, n_off = 0;
                for (std::size_t t = 0; t < agg_series.size(); ++t) {
                    if (calendar.days[t].day_of_month != slot) continue;
                    if (calendar.snap_on(t, state_idx)) {
                        sum_on += static_cast<double>(agg_series[t]);
                        ++n_on;
                    } else {
                        sum_off += static_cast<double>(agg_series[t]);
                        ++n_off;
                    }
                }
                const std::size_t idx = static_cast<std::size_t>(slot - 1);
                if (n_on > 0)
                    map.day_of_month_snap[idx] =
                        detail::floored_ratio(sum_on / static_cast<double>(n_on), global_mean);
                if (n_off > 0)
                    map.day_of_month[idx] =
                        detail::floored_ratio(sum_off / static_cast<double>(n_off), global_mean);
            }
        }
    }
    return map;
}

/// Event contribution of one day: the single event with the bigger effect
/// (larger |factor - 1|, ties broken by name) wins; event-free days
/// contribute 1; events without a learned factor count as factor 1.
inline double event_contribution(const FactorMap& factors, const CalendarDay& day) {
    double best = 1.0;
    double best_effect = -1.0;
    std::string best_name;
    for (const std::string& ev : day.events) {
        auto it = factors.event.find(ev);
        const double f = it == factors.event.end() ? 1.0 : it->second;
        const double effect = std::fabs(f - 1.0);
        if (effect > best_effect || (effect == best_effect && ev < best_name)) {
            best = f;
            best_effect = effect;
            best_name = ev;
        }
    }
    return best;
}

/// Composes the per-day amplitude vector over `length` days (history plus
/// horizon): product of day-of-week, day-of-month (SNAP-aware for the
/// series' state), month-of-year and event contributions.
inline std::vector<double> compose_amplitude(const FactorMap& factors,
                                             const CalendarTable& calendar,
                                             const std::string& state,
                                             std::size_t length) {
    if (calendar.size() < length)
        throw data_error("compose_amplitude: calendar covers " + std::to_string(calendar.size()) +
                         " days, need " + std::to_string(length));
    const int state_idx = calendar.snap_state_index(state);
    std::vector<double> amplitude(length);
    for (std::size_t t = 0; t < length; ++t) {
        const CalendarDay& day = calendar.days[t];
        const std::size_t dom_idx = static_cast<std::size_t>(day.day_of_month - 1);
        const double dom = calendar.snap_on(t, state_idx) ? factors.day_of_month_snap[dom_idx]
                                                          : factors.day_of_month[dom_idx];
        amplitude[t] = factors.day_of_week[static_cast<std::size_t>(day.weekday)] * dom *
                       factors.month_of_year[static_cast<std::size_t>(day.month - 1)] *
                       event_contribution(factors, day);
    }
    return amplitude;
}

} // namespace skucast
