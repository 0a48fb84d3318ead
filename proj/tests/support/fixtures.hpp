#pragma once

// Shared builders for synthetic calendars, series and CSV fixtures.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "skucast/calendar.hpp"
#include "skucast/hierarchy.hpp"

namespace fixtures {

/// Builds a consecutive calendar starting at `start`, with SNAP flags set on
/// each state's impact days-of-month and optional events by day index.
inline skucast::CalendarTable make_calendar(
    std::chrono::year_month_day start, std::size_t n_days,
    std::vector<std::string> snap_states = {"CA", "TX", "WI"},
    const std::map<std::size_t, std::vector<std::string>>& events = {}) {
    skucast::CalendarTable table;
    table.snap_states = std::move(snap_states);
    std::chrono::sys_days date{start};
    for (std::size_t i = 0; i < n_days; ++i, date += std::chrono::days{1}) {
        skucast::CalendarDay day;
        day.date = date;
        day.weekday = (static_cast<int>(std::chrono::weekday(date).c_encoding()) + 6) % 7;
        const std::chrono::year_month_day ymd{date};
        day.day_of_month = static_cast<int>(static_cast<unsigned>(ymd.day()));
        day.month = static_cast<int>(static_cast<unsigned>(ymd.month()));
        for (const std::string& state : table.snap_states) {
            const auto& impact = skucast::snap_impact_days(state);
            const bool on = std::find(impact.begin(), impact.end(), day.day_of_month) != impact.end();
            day.snap.push_back(on ? 1 : 0);
        }
        auto ev = events.find(i);
        if (ev != events.end()) day.events = ev->second;
        table.days.push_back(std::move(day));
    }
    return table;
}

inline skucast::SalesSeries make_series(std::string item, std::string dept, std::string cat,
                                        std::string store, std::string state,
                                        std::vector<long long> values) {
    skucast::SalesSeries s;
    s.item = std::move(item);
    s.dept = std::move(dept);
    s.cat = std::move(cat);
    s.store = std::move(store);
    s.state = std::move(state);
    s.values = std::move(values);
    return s;
}

/// Draws a synthetic history from the generative model itself: the level
/// recursion plus NB emissions, using an independent generator.
inline std::vector<long long> simulate_history(double alpha, double theta, double z0,
                                               const std::vector<double>& amplitude,
                                               std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<long long> y(amplitude.size());
    double z = z0;
    for (std::size_t t = 0; t < amplitude.size(); ++t) {
        const double lambda = std::max(z * amplitude[t], 1e-9);
        std::gamma_distribution<double> gamma(lambda / theta, theta);
        const double rate = gamma(rng);
        long long draw = 0;
        if (rate > 0.0) {
            std::poisson_distribution<long long> poisson(rate);
            draw = poisson(rng);
        }
        y[t] = draw;
        z = alpha * static_cast<double>(draw) / amplitude[t] + (1.0 - alpha) * z;
    }
    return y;
}

/// Unique scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& label) {
    static std::uint64_t counter = 0;
    auto dir = std::filesystem::temp_directory_path() /
               ("skucast_test_" + label + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

/// Writes bottom series in the wide sales CSV layout.
inline void write_sales_csv(const std::filesystem::path& path,
                            const std::vector<skucast::SalesSeries>& series) {
    std::ofstream out(path);
    out << "item_id,dept_id,cat_id,store_id,state_id";
    for (std::size_t d = 1; d <= series.front().values.size(); ++d) out << ",d_" << d;
    out << "\n";
    for (const auto& s : series) {
        out << s.item << "," << s.dept << "," << s.cat << "," << s.store << "," << s.state;
        for (long long v : s.values) out << "," << v;
        out << "\n";
    }
}

/// Writes a calendar table in the competition CSV layout.
inline void write_calendar_csv(const std::filesystem::path& path,
                               const skucast::CalendarTable& table) {
    std::ofstream out(path);
    out << "date,weekday,event_name_1,event_name_2";
    for (const std::string& state : table.snap_states) out << ",snap_" << state;
    out << "\n";
    for (const auto& day : table.days) {
        out << skucast::format_date(day.date) << "," << day.weekday;
        out << "," << (day.events.size() > 0 ? day.events[0] : "");
        out << "," << (day.events.size() > 1 ? day.events[1] : "");
        for (char flag : day.snap) out << "," << static_cast<int>(flag);
        out << "\n";
    }
}

} // namespace fixtures
