#pragma once

#include "skucast/hierarchy.hpp"
#include "skucast/parallel.hpp"

namespace skucast {

inline Level12Result forecast_level12(std::span<const SalesSeries> bottom,
                                      const CalendarTable& calendar, const ForecastConfig& cfg) {
    // Factor maps live at store-department level and are shared by all
    // item-store children of the same parent.
    const auto parents = group_by_level(9, bottom);
    std::map<std::string, FactorMap> parent_factors;
    std::vector<std::pair<const std::string*, const std::vector<std::size_t>*>> parent_list;
    for (const auto& [pid, members] : parents) parent_list.emplace_back(&pid, &members);
    std::vector<FactorMap> factor_slots(parent_list.size());
    parallel_for(parent_list.size(), cfg.jobs, [&](std::size_t i) {
        const auto& members = *parent_list[i].second;
        const std::vector<long long> agg = aggregate_history(bottom, members);
        factor_slots[i] = estimate_factor_map(agg, calendar, common_state(bottom, members));
    });
    for (std::size_t i = 0; i < parent_list.size(); ++i)
        parent_factors[*parent_list[i].first] = std::move(factor_slots[i]);

    Level12Result result;
    std::vector<QuantileForecast> qf_slots(bottom.size());
    std::vector<TrajectorySet> ts_slots(bottom.size());
    parallel_for(bottom.size(), cfg.jobs, [&](std::size_t i) {
        const SalesSeries& s = bottom[i];
        const FactorMap& factors = parent_factors.at(node_id(9, s));
        qf_slots[i] = detail::fit_and_simulate_node(s.values, factors, calendar, s.state,
                                                    node_id(12, s), cfg, &ts_slots[i]);
    });
    for (std::size_t i = 0; i < bottom.size(); ++i) {
        const std::string id = node_id(12, bottom[i]);
        result.trajectories[id] = std::move(ts_slots[i]);
        result.quantiles[id] = std::move(qf_slots[i]);
    }
    return result;
}

inline std::map<std::string, QuantileForecast> forecast_level(int level,
                                                              std::span<const SalesSeries> bottom,
                                                              const CalendarTable& calendar,
                                                              const ForecastConfig& cfg,
                                                              const Level12Result* level12) {
    if (bottom.empty()) throw data_error("forecast_level: no series");
    std::map<std::string, QuantileForecast> out;

    if (level == 12) {
        if (!level12) throw data_error("forecast_level: level 12 results required");
        return level12->quantiles;
    }

    if (level == 10 || level == 11) {
        if (!level12) throw data_error("forecast_level: overlay levels need level-12 trajectories");
        for (const auto& [nid, members] : group_by_level(level, bottom)) {
            std::vector<const TrajectorySet*> children;
            children.reserve(members.size());
            for (std::size_t idx : members) {
                auto it = level12->trajectories.find(node_id(12, bottom[idx]));
                if (it == level12->trajectories.end())
                    throw data_error("forecast_level: missing level-12 trajectories for descendant of " + nid);
                children.push_back(&it->second);
            }
            TrajectorySet parent = overlay_trajectories(std::span<const TrajectorySet* const>(children));
            parent.series_id = nid;
            out[nid] = extract_quantiles(parent, cfg.quantile_levels);
        }
        return out;
    }

    // Levels 1..9: model each node's own aggregate; factors come from the
    // node's own history (SNAP split only when the node sits in one state).
    const auto groups = group_by_level(level, bottom);
    std::vector<std::pair<const std::string*, const std::vector<std::size_t>*>> nodes;
    for (const auto& [nid, members] : groups) nodes.emplace_back(&nid, &members);
    std::vector<QuantileForecast> slots(nodes.size());
    parallel_for(nodes.size(), cfg.jobs, [&](std::size_t i) {
        const auto& members = *nodes[i].second;
        const std::vector<long long> agg = aggregate_history(bottom, members);
        const std::string state = common_state(bottom, members);
        const FactorMap factors = estimate_factor_map(agg, calendar, state);
        slots[i] = detail::fit_and_simulate_node(agg, factors, calendar, state, *nodes[i].first, cfg);
    });
    for (std::size_t i = 0; i < nodes.size(); ++i) out[*nodes[i].first] = std::move(slots[i]);
    return out;
}

} // namespace skucast
