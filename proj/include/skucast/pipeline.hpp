#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "skucast/calendar.hpp"
#include "skucast/errors.hpp"
#include "skucast/evaluate.hpp"
#include "skucast/hierarchy.hpp"
#include "skucast/ingest.hpp"

namespace skucast {

/// Full run configuration; file-backed keys can be overridden by CLI flags.
struct RunConfig {
    std::string sales_path;
    std::string calendar_path;
    std::string prices_path; ///< optional; unit prices assumed when empty
    std::string out_path;
    std::size_t horizon = 28;
    std::size_t trajectories = 10000;
    std::uint64_t master_seed = 0;
    int jobs = 1;
    std::vector<int> levels = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    std::vector<double> quantile_levels = kDefaultQuantileLevels;
    GridSpec grid = GridSpec::defaults();
    std::string tag = "validation"; ///< submission id suffix
    std::vector<std::string> fanchart_nodes;

    void validate() const {
        if (horizon < 1) throw config_error("horizon must be >= 1");
        if (trajectories < 1) throw config_error("trajectories must be >= 1");
        if (quantile_levels.empty()) throw config_error("at least one quantile level required");
        for (std::size_t i = 0; i < quantile_levels.size(); ++i) {
            if (!(quantile_levels[i] > 0.0 && quantile_levels[i] < 1.0))
                throw config_error("quantile levels must lie in (0, 1)");
            if (i > 0 && quantile_levels[i] <= quantile_levels[i - 1])
                throw config_error("quantile levels must be strictly increasing");
        }
        for (int level : levels)
            if (level < 1 || level > 12) throw config_error("levels must be in 1..12");
        if (jobs < 1) throw config_error("jobs must be >= 1");
    }

    ForecastConfig forecast_config() const {
        ForecastConfig fc;
        fc.grid = grid;
        fc.horizon = horizon;
        fc.trajectories = trajectories;
        fc.master_seed = master_seed;
        fc.quantile_levels = quantile_levels;
        fc.jobs = jobs;
        return fc;
    }
};

namespace detail {

inline std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        try {
            out.push_back(std::stod(token));
        } catch (const std::exception&) {
            throw config_error("bad value '" + token + "' in " + what);
        }
    }
    if (out.empty()) throw config_error(what + " must not be empty");
    return out;
}

inline std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
    std::vector<int> out;
    for (double v : parse_double_list(text, what)) out.push_back(static_cast<int>(v));
    return out;
}

/// Fixed-point formatting with up to 3 fractional digits, trailing zeros
/// trimmed; keeps submission files byte-stable across runs.
inline std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    std::string s = buf;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

inline std::string format_quantile(double tau) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", tau);
    return buf;
}

} // namespace detail

/// Applies `key = value` lines from a flat config file onto defaults.
/// '#' starts a comment; unknown keys are rejected.
inline void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        if (strip(line).empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(line_no) + ": expected key=value");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key == "sales") cfg.sales_path = value;
        else if (key == "calendar") cfg.calendar_path = value;
        else if (key == "prices") cfg.prices_path = value;
        else if (key == "out") cfg.out_path = value;
        else if (key == "horizon") cfg.horizon = static_cast<std::size_t>(std::stoull(value));
        else if (key == "trajectories") cfg.trajectories = static_cast<std::size_t>(std::stoull(value));
        else if (key == "seed") cfg.master_seed = std::stoull(value);
        else if (key == "jobs") cfg.jobs = std::stoi(value);
        else if (key == "tag") cfg.tag = value;
        else if (key == "levels") cfg.levels = detail::parse_int_list(value, "levels");
        else if (key == "quantiles") cfg.quantile_levels = detail::parse_double_list(value, "quantiles");
        else if (key == "grid.alphas") cfg.grid.alphas = detail::parse_double_list(value, "grid.alphas");
        else if (key == "grid.thetas") cfg.grid.thetas = detail::parse_double_list(value, "grid.thetas");
        else if (key == "grid.z_seeds") cfg.grid.z_seeds = detail::parse_double_list(value, "grid.z_seeds");
        else throw config_error(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
}

struct ForecastRun {
    std::size_t nodes = 0;
    std::size_t rows = 0;
};

/// End-to-end forecast: ingest, fit, simulate, aggregate and write one
/// submission CSV with rows `id,F1..Fh`, nine (or as configured) rows per
/// node. Deterministic given (data, config, seed).
inline ForecastRun run_forecast(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.out_path.empty()) throw config_error("output path required");
    const std::vector<SalesSeries> bottom = load_sales_csv_file(cfg.sales_path);
    const CalendarTable calendar = CalendarTable::from_csv_file(cfg.calendar_path);
    const std::size_t history = bottom.front().values.size();
    if (calendar.size() < history + cfg.horizon)
        throw data_error("calendar covers " + std::to_string(calendar.size()) +
                         " days but history plus horizon needs " +
                         std::to_string(history + cfg.horizon));

    const ForecastConfig fc = cfg.forecast_config();
    std::vector<int> levels = cfg.levels;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    const bool needs_bottom = std::any_of(levels.begin(), levels.end(),
                                          [](int lvl) { return lvl >= 10; });
    Level12Result level12;
    if (needs_bottom) level12 = forecast_level12(bottom, calendar, fc);

    std::ofstream out(cfg.out_path);
    if (!out) throw data_error("cannot write " + cfg.out_path);
    out << "id";
    for (std::size_t t = 1; t <= cfg.horizon; ++t) out << ",F" << t;
    out << "\n";

    ForecastRun summary;
    std::map<std::string, QuantileForecast> fanchart_hits;
    for (int level : levels) {
        const auto forecasts =
            forecast_level(level, bottom, calendar, fc, needs_bottom ? &level12 : nullptr);
        for (const auto& [nid, qf] : forecasts) {
            ++summary.nodes;
            for (std::size_t q = 0; q < qf.levels.size(); ++q) {
                out << nid << "_" << detail::format_quantile(qf.levels[q]) << "_" << cfg.tag;
                for (std::size_t t = 0; t < qf.horizon; ++t)
                    out << "," << detail::format_value(qf.at(t, q));
                out << "\n";
                ++summary.rows;
            }
            if (std::find(cfg.fanchart_nodes.begin(), cfg.fanchart_nodes.end(), nid) !=
                cfg.fanchart_nodes.end())
                fanchart_hits[nid] = qf;
        }
    }
    out.close();

    for (const auto& [nid, qf] : fanchart_hits) {
        const std::string path = cfg.out_path + ".fanchart." + nid + ".csv";
        std::ofstream fan(path);
        if (!fan) throw data_error("cannot write " + path);
        fan << "date,level,value\n";
        for (std::size_t t = 0; t < qf.horizon; ++t)
            for (std::size_t q = 0; q < qf.levels.size(); ++q)
                fan << format_date(calendar.days[history + t].date) << ","
                    << detail::format_quantile(qf.levels[q]) << ","
                    << detail::format_value(qf.at(t, q)) << "\n";
    }
    return summary;
}

struct ScoreReport {
    std::vector<SeriesScore> rows;
    std::map<int, double> level_wspl;
    std::map<int, double> level_wspl_naive;
    std::map<int, double> level_wspl_snaive;
    double overall = 0.0;
    double overall_naive = 0.0;
    double overall_snaive = 0.0;
};

namespace detail {

/// Parses a submission file back into per-node quantile grids.
inline std::map<std::string, QuantileForecast> load_forecasts(const std::string& path,
                                                              const std::string& tag,
                                                              std::span<const double> levels,
                                                              std::size_t horizon) {
    std::ifstream in = open_input(path);
    CsvReader reader(in, path);
    std::vector<std::string> fields;
    if (!reader.next(fields)) reader.fail("empty forecast file");
    if (fields.empty() || fields[0] != "id") reader.fail("forecast header must start with 'id'");
    if (fields.size() != horizon + 1)
        reader.fail("forecast horizon mismatch: file has " + std::to_string(fields.size() - 1) +
                    " day columns, expected " + std::to_string(horizon));

    std::map<std::string, QuantileForecast> out;
    const std::string tag_suffix = "_" + tag;
    while (reader.next(fields)) {
        if (fields.size() != horizon + 1) reader.fail("wrong field count");
        std::string id = fields[0];
        if (id.size() <= tag_suffix.size() || id.substr(id.size() - tag_suffix.size()) != tag_suffix)
            reader.fail("forecast id '" + id + "' does not end with tag '" + tag + "'");
        id.erase(id.size() - tag_suffix.size());
        const std::size_t us = id.rfind('_');
        if (us == std::string::npos) reader.fail("forecast id missing quantile component");
        const double tau = parse_double(reader, id.substr(us + 1), "quantile level");
        const std::string node = id.substr(0, us);
        std::size_t level_idx = levels.size();
        for (std::size_t q = 0; q < levels.size(); ++q)
            if (std::fabs(levels[q] - tau) < 1e-9) level_idx = q;
        if (level_idx == levels.size())
            reader.fail("quantile level " + id.substr(us + 1) + " not in configured levels");

        QuantileForecast& qf = out[node];
        if (qf.values.empty()) {
            qf.levels.assign(levels.begin(), levels.end());
            qf.horizon = horizon;
            qf.values.assign(horizon * levels.size(), 0.0);
        }
        for (std::size_t t = 0; t < horizon; ++t)
            qf.values[t * levels.size() + level_idx] = parse_double(reader, fields[t + 1], "forecast");
    }
    return out;
}

} // namespace detail

/// Joins a written submission with held-out bottom-level actuals, scores
/// every configured node with SPL/WSPL plus naive and seasonal-naive
/// baselines, and writes the score report CSV to `report_path`.
inline ScoreReport run_evaluate(const RunConfig& cfg, const std::string& actuals_path,
                                const std::string& report_path) {
    cfg.validate();
    const std::vector<SalesSeries> bottom = load_sales_csv_file(cfg.sales_path);
    const CalendarTable calendar = CalendarTable::from_csv_file(cfg.calendar_path);
    const std::vector<SalesSeries> actual_bottom = load_sales_csv_file(actuals_path);
    PriceTable prices;
    if (!cfg.prices_path.empty()) prices = PriceTable::from_csv_file(cfg.prices_path);

    const std::size_t horizon = actual_bottom.front().values.size();
    const auto forecasts =
        detail::load_forecasts(cfg.out_path, cfg.tag, cfg.quantile_levels, horizon);

    std::map<std::string, std::size_t> actual_index;
    for (std::size_t i = 0; i < actual_bottom.size(); ++i)
        actual_index[actual_bottom[i].id()] = i;

    ScoreReport report;
    std::vector<SeriesScore> naive_rows, snaive_rows;
    for (int level : cfg.levels) {
        for (const auto& [nid, members] : group_by_level(level, bottom)) {
            auto fit_it = forecasts.find(nid);
            if (fit_it == forecasts.end())
                throw data_error("no forecast found for node " + nid + " (level " +
                                 std::to_string(level) + ")");
            const std::vector<long long> insample = aggregate_history(bottom, members);

            std::vector<double> actuals(horizon, 0.0);
            for (std::size_t idx : members) {
                auto ai = actual_index.find(bottom[idx].id());
                if (ai == actual_index.end())
                    throw data_error("actuals missing series " + bottom[idx].id());
                for (std::size_t t = 0; t < horizon; ++t)
                    actuals[t] += static_cast<double>(actual_bottom[ai->second].values[t]);
            }

            double weight = 0.0;
            for (std::size_t idx : members) weight += dollar_sales(bottom[idx], prices);

            SeriesScore row{nid, level, spl(actuals, fit_it->second, insample), weight};
            report.rows.push_back(row);
            const QuantileForecast naive_qf = baseline_quantiles(
                BaselineKind::naive, insample, calendar, horizon, cfg.quantile_levels);
            const QuantileForecast snaive_qf = baseline_quantiles(
                BaselineKind::snaive, insample, calendar, horizon, cfg.quantile_levels);
            naive_rows.push_back({nid, level, spl(actuals, naive_qf, insample), weight});
            snaive_rows.push_back({nid, level, spl(actuals, snaive_qf, insample), weight});
        }
    }

    report.level_wspl = wspl_by_level(report.rows);
    report.level_wspl_naive = wspl_by_level(naive_rows);
    report.level_wspl_snaive = wspl_by_level(snaive_rows);
    report.overall = wspl(report.rows);
    report.overall_naive = wspl(naive_rows);
    report.overall_snaive = wspl(snaive_rows);

    if (!report_path.empty()) {
        std::ofstream out(report_path);
        if (!out) throw data_error("cannot write " + report_path);
        out << "series_id,level,spl,weight\n";
        char buf[128];
        for (const SeriesScore& row : report.rows) {
            std::snprintf(buf, sizeof(buf), "%s,%d,%.9f,%.6f", row.id.c_str(), row.level, row.spl,
                          row.weight);
            out << buf << "\n";
        }
        for (const auto& [level, score] : report.level_wspl) {
            std::snprintf(buf, sizeof(buf), "LEVEL_%d,%d,%.9f,1", level, level, score);
            out << buf << "\n";
        }
        std::snprintf(buf, sizeof(buf), "OVERALL,0,%.9f,1", report.overall);
        out << buf << "\n";
        std::snprintf(buf, sizeof(buf), "BASELINE_NAIVE,0,%.9f,1", report.overall_naive);
        out << buf << "\n";
        std::snprintf(buf, sizeof(buf), "BASELINE_SNAIVE,0,%.9f,1", report.overall_snaive);
        out << buf << "\n";
    }
    return report;
}

} // namespace skucast
