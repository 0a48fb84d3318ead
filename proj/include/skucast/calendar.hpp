#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "skucast/csv.hpp"
#include "skucast/errors.hpp"

namespace skucast {

/// One calendar day: date parts plus named events and per-state SNAP flags.
struct CalendarDay {
    std::chrono::sys_days date{};
    int weekday = 0;      ///< 0 = Monday .. 6 = Sunday
    int day_of_month = 1; ///< 1..31
    int month = 1;        ///< 1..12
    std::vector<std::string> events;
    std::vector<char> snap; ///< parallel to CalendarTable::snap_states
};

/// Day-of-month slots on which SNAP disbursement affects food sales, per
/// state. Unknown states have no SNAP slots.
inline const std::vector<int>& snap_impact_days(const std::string& state) {
    static const std::vector<int> ca = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    static const std::vector<int> wi = {2, 3, 5, 6, 8, 9, 11, 12, 14, 15};
    static const std::vector<int> tx = {1, 3, 5, 6, 7, 9, 11, 12, 13, 15};
    static const std::vector<int> none;
    if (state == "CA") return ca;
    if (state == "WI") return wi;
    if (state == "TX") return tx;
    return none;
}

/// Consecutive run of calendar days covering history plus horizon.
class CalendarTable {
public:
    std::vector<std::string> snap_states; ///< states with a snap_* column
    std::vector<CalendarDay> days;

    std::size_t size() const { return days.size(); }

    int snap_state_index(const std::string& state) const {
        auto it = std::find(snap_states.begin(), snap_states.end(), state);
        return it == snap_states.end() ? -1 : static_cast<int>(it - snap_states.begin());
    }

    bool snap_on(std::size_t day_index, int state_index) const {
        return state_index >= 0 && days[day_index].snap[static_cast<std::size_t>(state_index)] != 0;
    }

    /// Parses the competition-style layout: date (ISO-8601), weekday
    /// (0-6, Monday = 0), event_name_1, event_name_2, then any number of
    /// snap_<STATE> 0/1 columns. Dates must be consecutive and weekday
    /// values must agree with the dates.
    static CalendarTable from_csv(std::istream& in, const std::string& source_name) {
        CsvReader reader(in, source_name);
        std::vector<std::string> fields;
        if (!reader.next(fields)) reader.fail("empty calendar file");

        int col_date = -1, col_weekday = -1;
        std::vector<int> col_events;
        std::vector<int> col_snap;
        CalendarTable table;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const std::string& name = fields[i];
            if (name == "date") col_date = static_cast<int>(i);
            else if (name == "weekday") col_weekday = static_cast<int>(i);
            else if (name.rfind("event_name", 0) == 0) col_events.push_back(static_cast<int>(i));
            else if (name.rfind("snap_", 0) == 0) {
                col_snap.push_back(static_cast<int>(i));
                table.snap_states.push_back(name.substr(5));
            }
        }
        if (col_date < 0 || col_weekday < 0)
            reader.fail("calendar header must contain 'date' and 'weekday' columns");

        const std::size_t width = fields.size();
        while (reader.next(fields)) {
            if (fields.size() != width)
                reader.fail("expected " + std::to_string(width) + " fields, got " +
                            std::to_string(fields.size()));
            CalendarDay day;
            day.date = parse_date(reader, fields[static_cast<std::size_t>(col_date)]);
            const long long wd = parse_int(reader, fields[static_cast<std::size_t>(col_weekday)], "weekday");
            if (wd < 0 || wd > 6) reader.fail("weekday out of range 0..6");
            day.weekday = static_cast<int>(wd);
            const std::chrono::year_month_day ymd{day.date};
            day.day_of_month = static_cast<int>(static_cast<unsigned>(ymd.day()));
            day.month = static_cast<int>(static_cast<unsigned>(ymd.month()));
            const int computed_wd =
                (static_cast<int>(std::chrono::weekday(day.date).c_encoding()) + 6) % 7;
            if (computed_wd != day.weekday)
                reader.fail("weekday " + std::to_string(day.weekday) + " does not match date " +
                            fields[static_cast<std::size_t>(col_date)]);
            if (!table.days.empty()) {
                const auto gap = (day.date - table.days.back().date).count();
                if (gap != 1)
                    reader.fail("calendar days must be consecutive; gap before " +
                                fields[static_cast<std::size_t>(col_date)]);
            }
            for (int ci : col_events) {
                const std::string& ev = fields[static_cast<std::size_t>(ci)];
                if (!ev.empty()) day.events.push_back(ev);
            }
            for (int ci : col_snap) {
                const long long flag = parse_int(reader, fields[static_cast<std::size_t>(ci)], "snap flag");
                if (flag != 0 && flag != 1) reader.fail("snap flag must be 0 or 1");
                day.snap.push_back(static_cast<char>(flag));
            }
            table.days.push_back(std::move(day));
        }
        if (table.days.empty()) reader.fail("calendar has no data rows");
        return table;
    }

    static CalendarTable from_csv_file(const std::string& path) {
        std::ifstream in = open_input(path);
        return from_csv(in, path);
    }

private:
    static std::chrono::sys_days parse_date(const CsvReader& reader, const std::string& text) {
        int y = 0, m = 0, d = 0;
        if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
            std::sscanf(text.c_str(), "%d-%d-%d", &y, &m, &d) != 3)
            reader.fail("expected ISO-8601 date, got '" + text + "'");
        const std::chrono::year_month_day ymd{std::chrono::year{y},
                                              std::chrono::month{static_cast<unsigned>(m)},
                                              std::chrono::day{static_cast<unsigned>(d)}};
        if (!ymd.ok()) reader.fail("invalid date '" + text + "'");
        return std::chrono::sys_days{ymd};
    }
};

inline std::string format_date(std::chrono::sys_days date) {
    const std::chrono::year_month_day ymd{date};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

} // namespace skucast
