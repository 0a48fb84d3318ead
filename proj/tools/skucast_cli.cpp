// Command-line workflow: ingest sales/calendar/prices, fit and simulate the
// hierarchy, emit submission-format quantile files, and score them against
// held-out actuals.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skucast/pipeline.hpp"

namespace {

struct CliArgs {
    std::string config_path;
    std::string levels_text;
    std::string actuals_path;
    std::string report_path;
};

void add_common_options(CLI::App& cmd, skucast::RunConfig& cfg, CliArgs& args) {
    cmd.add_option("--sales", cfg.sales_path, "wide-format sales CSV");
    cmd.add_option("--calendar", cfg.calendar_path, "calendar CSV (date,weekday,events,snap_*)");
    cmd.add_option("--prices", cfg.prices_path, "weekly prices CSV (store_id,item_id,week,price)");
    cmd.add_option("--config", args.config_path, "flat key=value config file; flags override it");
    cmd.add_option("--seed", cfg.master_seed, "master random seed");
    cmd.add_option("--horizon", cfg.horizon, "forecast horizon in days");
    cmd.add_option("--trajectories", cfg.trajectories, "Monte Carlo trajectories per node");
    cmd.add_option("--levels", args.levels_text, "comma-separated hierarchy levels (default 1..12)");
    cmd.add_option("--out", cfg.out_path, "output file path");
    cmd.add_option("--jobs", cfg.jobs, "worker threads");
}

// Config file values apply first, then any flag the user actually passed.
void finalize_config(CLI::App& cmd, skucast::RunConfig& cfg, CliArgs& args) {
    if (!args.config_path.empty()) {
        skucast::RunConfig from_file;
        skucast::apply_config_file(from_file, args.config_path);
        const skucast::RunConfig flags = cfg;
        cfg = from_file;
        if (cmd.count("--sales")) cfg.sales_path = flags.sales_path;
        if (cmd.count("--calendar")) cfg.calendar_path = flags.calendar_path;
        if (cmd.count("--prices")) cfg.prices_path = flags.prices_path;
        if (cmd.count("--seed")) cfg.master_seed = flags.master_seed;
        if (cmd.count("--horizon")) cfg.horizon = flags.horizon;
        if (cmd.count("--trajectories")) cfg.trajectories = flags.trajectories;
        if (cmd.count("--out")) cfg.out_path = flags.out_path;
        if (cmd.count("--jobs")) cfg.jobs = flags.jobs;
    }
    if (!args.levels_text.empty())
        cfg.levels = skucast::detail::parse_int_list(args.levels_text, "levels");
    if (cfg.sales_path.empty()) throw skucast::config_error("--sales is required");
    if (cfg.calendar_path.empty()) throw skucast::config_error("--calendar is required");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probabilistic retail sales forecasting over the 12-level hierarchy"};
    app.require_subcommand(1);

    skucast::RunConfig forecast_cfg, evaluate_cfg;
    CliArgs forecast_args, evaluate_args;

    CLI::App* forecast = app.add_subcommand("forecast", "fit, simulate and write quantile files");
    add_common_options(*forecast, forecast_cfg, forecast_args);
    forecast->add_option("--emit-fanchart", forecast_cfg.fanchart_nodes,
                         "node id whose quantile fan is written as long-format CSV (repeatable)");

    CLI::App* evaluate = app.add_subcommand("evaluate", "score a written forecast against actuals");
    add_common_options(*evaluate, evaluate_cfg, evaluate_args);
    evaluate->add_option("--actuals", evaluate_args.actuals_path,
                         "held-out bottom-level actuals (wide CSV, h day columns)")
        ->required();
    evaluate->add_option("--report", evaluate_args.report_path, "score report CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (forecast->parsed()) {
            finalize_config(*forecast, forecast_cfg, forecast_args);
            if (forecast_cfg.out_path.empty())
                throw skucast::config_error("--out is required for forecast");
            const skucast::ForecastRun run = skucast::run_forecast(forecast_cfg);
            std::printf("wrote %zu rows for %zu nodes to %s\n", run.rows, run.nodes,
                        forecast_cfg.out_path.c_str());
        } else {
            finalize_config(*evaluate, evaluate_cfg, evaluate_args);
            if (evaluate_cfg.out_path.empty())
                throw skucast::config_error("--out must name the forecast file to score");
            const skucast::ScoreReport report = skucast::run_evaluate(
                evaluate_cfg, evaluate_args.actuals_path, evaluate_args.report_path);
            std::printf("WSPL %.6f (naive %.6f, snaive %.6f) over %zu series\n", report.overall,
                        report.overall_naive, report.overall_snaive, report.rows.size());
        }
    } catch (const skucast::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const skucast::data_error& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
