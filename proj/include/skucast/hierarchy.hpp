#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "skucast/amplitude.hpp"
#include "skucast/errors.hpp"
#include "skucast/issm.hpp"
#include "skucast/simulate.hpp"

namespace skucast {

/// One bottom-level (item x store) daily count series with its hierarchy keys.
struct SalesSeries {
    std::string item;
    std::string dept;
    std::string cat;
    std::string store;
    std::string state;
    std::vector<long long> values;

    std::string id() const { return item + "_" + store; }
};

enum class KeyField { state, store, category, department, item };

/// Key fields defining each of the twelve aggregation levels. Level 1 is the
/// grand total; level 12 is item x store.
inline const std::vector<KeyField>& level_key_fields(int level) {
    static const std::array<std::vector<KeyField>, 13> defs = {{
        {},                                       // unused
        {},                                       // 1: total
        {KeyField::state},                        // 2
        {KeyField::store},                        // 3
        {KeyField::category},                     // 4
        {KeyField::department},                   // 5
        {KeyField::state, KeyField::category},    // 6
        {KeyField::state, KeyField::department},  // 7
        {KeyField::store, KeyField::category},    // 8
        {KeyField::store, KeyField::department},  // 9
        {KeyField::item},                         // 10
        {KeyField::item, KeyField::state},        // 11
        {KeyField::item, KeyField::store},        // 12
    }};
    if (level < 1 || level > 12) throw data_error("level must be in 1..12");
    return defs[static_cast<std::size_t>(level)];
}

inline const std::string& key_field_value(const SalesSeries& s, KeyField f) {
    switch (f) {
        case KeyField::state: return s.state;
        case KeyField::store: return s.store;
        case KeyField::category: return s.cat;
        case KeyField::department: return s.dept;
        case KeyField::item: return s.item;
    }
    throw data_error("unreachable key field");
}

/// Node identifier of a bottom series' ancestor at the given level.
inline std::string node_id(int level, const SalesSeries& s) {
    const auto& fields = level_key_fields(level);
    if (fields.empty()) return "Total";
    std::string id;
    for (KeyField f : fields) {
        if (!id.empty()) id += "_";
        id += key_field_value(s, f);
    }
    return id;
}

/// Groups bottom series by their ancestor node at `level`; node id ->
/// indices into `bottom`, deterministically ordered.
inline std::map<std::string, std::vector<std::size_t>> group_by_level(
    int level, std::span<const SalesSeries> bottom) {
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < bottom.size(); ++i) groups[node_id(level, bottom[i])].push_back(i);
    return groups;
}

/// Element-wise integer sum of descendant histories.
inline std::vector<long long> aggregate_history(std::span<const SalesSeries> bottom,
                                                std::span<const std::size_t> members) {
    if (members.empty()) throw data_error("aggregate_history: no descendant series");
    std::vector<long long> total(bottom[members[0]].values.size(), 0);
    for (std::size_t idx : members) {
        const auto& values = bottom[idx].values;
        if (values.size() != total.size())
            throw data_error("aggregate_history: descendant length mismatch");
        for (std::size_t t = 0; t < total.size(); ++t) total[t] += values[t];
    }
    return total;
}

/// Element-wise sum of child trajectory sets: parent sample (u, t) is the
/// sum of each child's sample (u, t). Children must share U and H.
inline TrajectorySet overlay_trajectories(std::span<const TrajectorySet* const> children) {
    if (children.empty()) throw data_error("overlay_trajectories: no children");
    TrajectorySet out;
    out.num_trajectories = children[0]->num_trajectories;
    out.horizon = children[0]->horizon;
    out.master_seed = children[0]->master_seed;
    out.samples.assign(out.num_trajectories * out.horizon, 0);
    for (const TrajectorySet* child : children) {
        if (child->num_trajectories != out.num_trajectories || child->horizon != out.horizon)
            throw data_error("overlay_trajectories: child shape mismatch");
        for (std::size_t i = 0; i < out.samples.size(); ++i) out.samples[i] += child->samples[i];
    }
    return out;
}

inline TrajectorySet overlay_trajectories(const std::vector<TrajectorySet>& children) {
    std::vector<const TrajectorySet*> ptrs;
    ptrs.reserve(children.size());
    for (const auto& c : children) ptrs.push_back(&c);
    return overlay_trajectories(std::span<const TrajectorySet* const>(ptrs));
}

/// Knobs shared by every per-node fit/simulate step.
struct ForecastConfig {
    GridSpec grid = GridSpec::defaults();
    std::size_t horizon = 28;
    std::size_t trajectories = 10000;
    std::uint64_t master_seed = 0;
    std::vector<double> quantile_levels = kDefaultQuantileLevels;
    int jobs = 1;
};

/// State id shared by every member of a node, or empty when the node spans
/// several states (no SNAP split applies then).
inline std::string common_state(std::span<const SalesSeries> bottom,
                                std::span<const std::size_t> members) {
    const std::string& first = bottom[members[0]].state;
    for (std::size_t idx : members)
        if (bottom[idx].state != first) return {};
    return first;
}

namespace detail {

inline QuantileForecast fit_and_simulate_node(std::span<const long long> history,
                                              const FactorMap& factors,
                                              const CalendarTable& calendar,
                                              const std::string& state,
                                              const std::string& id,
                                              const ForecastConfig& cfg,
                                              TrajectorySet* keep_trajectories = nullptr) {
    const std::size_t total_len = history.size() + cfg.horizon;
    const std::vector<double> amplitude = compose_amplitude(factors, calendar, state, total_len);
    const std::span<const double> l_hist(amplitude.data(), history.size());
    const std::span<const double> l_future(amplitude.data() + history.size(), cfg.horizon);
    const FittedModel model = fit(history, l_hist, cfg.grid);
    TrajectorySet ts = generate_trajectories(model, l_future, cfg.trajectories, cfg.master_seed, id);
    QuantileForecast qf = extract_quantiles(ts, cfg.quantile_levels);
    if (keep_trajectories) *keep_trajectories = std::move(ts);
    return qf;
}

} // namespace detail

/// Bottom-level results kept around for the overlay levels.
struct Level12Result {
    std::map<std::string, TrajectorySet> trajectories; ///< node id -> trajectories
    std::map<std::string, QuantileForecast> quantiles;
};

class parallel_runner; // forward declared in parallel.hpp

/// Fits and simulates every level-12 series. Factor maps are estimated once
/// per store-department parent (level 9) and pushed down to its items.
Level12Result forecast_level12(std::span<const SalesSeries> bottom, const CalendarTable& calendar,
                               const ForecastConfig& cfg);

/// Quantile forecasts for every node of one level. Levels 10 and 11 overlay
/// the provided level-12 trajectories; level 12 returns them directly;
/// levels 1..9 fit each node's own aggregate with its own factor map.
std::map<std::string, QuantileForecast> forecast_level(int level,
                                                       std::span<const SalesSeries> bottom,
                                                       const CalendarTable& calendar,
                                                       const ForecastConfig& cfg,
                                                       const Level12Result* level12 = nullptr);

} // namespace skucast

#include "skucast/hierarchy_impl.hpp"
