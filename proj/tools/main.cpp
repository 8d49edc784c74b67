// Command-line front end: synthesize data, export the lead-lag network,
// list quarterly pair selections, run the backtest, or sweep the strategy
// parameter grid. Exit codes: 0 ok, 2 bad flags/config, 3 bad or
// insufficient data, 4 anything else.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "leadlag/backtest.hpp"
#include "leadlag/config.hpp"
#include "leadlag/detect.hpp"
#include "leadlag/errors.hpp"
#include "leadlag/graph.hpp"
#include "leadlag/panel.hpp"
#include "leadlag/scoring.hpp"
#include "leadlag/sweep.hpp"

namespace {

using namespace leadlag;

struct SpanIndices {
    Eigen::Index begin = 0;
    Eigen::Index end = 0;
};

SpanIndices resolve_span(const std::vector<Date>& dates, const SpanSpec& span) {
    SpanIndices indices;
    indices.end = static_cast<Eigen::Index>(dates.size()) - 1;
    if (span.start) {
        const auto it = std::lower_bound(dates.begin(), dates.end(), *span.start);
        if (it == dates.end()) throw DataError("span starts after the last data date");
        indices.begin = it - dates.begin();
    }
    if (span.end) {
        const auto it = std::upper_bound(dates.begin(), dates.end(), *span.end);
        if (it == dates.begin()) throw DataError("span ends before the first data date");
        indices.end = (it - dates.begin()) - 1;
    }
    if (indices.end < indices.begin) throw DataError("span selects no dates");
    return indices;
}

PricePanel load_inputs(const RunConfig& config, LoadReport* report = nullptr) {
    if (config.prices_path.empty())
        throw ConfigError("no prices file (set 'prices' in the config or pass --prices)");
    PricePanel panel = load_price_panel(config.prices_path, config.gaps, report);
    if (!config.benchmark_path.empty()) {
        const BenchmarkSeries series = load_benchmark_csv(config.benchmark_path);
        panel = align_calendars(panel, series);
    }
    return panel;
}

void report_drops(const LoadReport& report) {
    for (const auto& ticker : report.dropped_high_missing)
        std::cerr << "note: dropped " << ticker << " (too many missing closes)\n";
    for (const auto& ticker : report.dropped_unfillable)
        std::cerr << "note: dropped " << ticker << " (gap too wide to fill)\n";
}

std::filesystem::path out_path(const RunConfig& config, const char* name) {
    std::filesystem::create_directories(config.out_dir);
    return std::filesystem::path(config.out_dir) / name;
}

// Slices whose windows close strictly before the panel date `as_of`, i.e.
// usable at that date's close.
Eigen::Index admissible_slices(const LeadLagTensor& tensor, const DetectionParams& detection,
                               Eigen::Index as_of) {
    Eigen::Index count = 0;
    for (const auto start : tensor.window_starts) {
        if (start + detection.window + detection.lag > as_of) break;
        ++count;
    }
    return count;
}

int cmd_synth(const RunConfig& config) {
    const PricePanel panel = generate_synthetic_panel(config.synth);
    const auto prices = out_path(config, "prices.csv");
    write_price_csv(panel, prices.string());
    std::cout << "wrote " << prices.string() << " (" << panel.num_tickers() << " tickers, "
              << panel.num_dates() << " days)\n";
    if (panel.benchmark) {
        const auto benchmark = out_path(config, "benchmark.csv");
        write_benchmark_csv(panel, benchmark.string());
        std::cout << "wrote " << benchmark.string() << '\n';
    }
    return 0;
}

int cmd_network(const RunConfig& config) {
    LoadReport report;
    const PricePanel panel = load_inputs(config, &report);
    report_drops(report);
    const SpanIndices span = resolve_span(panel.dates, config.span);
    const ReturnsPanel returns = compute_returns(panel);
    const LeadLagTensor tensor =
        build_tensor(returns, config.detection, static_cast<int>(config.stride));

    // The network as the strategy would see it at the span's final close.
    const Eigen::Index admissible = admissible_slices(tensor, config.detection, span.end);
    if (admissible == 0) throw DataError("no detection window closes inside the span");
    const int lookback =
        static_cast<int>(std::min<Eigen::Index>(config.selection.lookback_slices, admissible));
    const SummedLeadMatrix summed = sum_and_mask(tensor, lookback, admissible);
    const auto pairs = top_pairs(summed, config.selection.candidate_count);
    if (pairs.empty()) throw DataError("no lead-lag pairs detected");

    const auto dot = out_path(config, "network.dot");
    export_graph(pairs, dot.string());
    const auto adjacency = out_path(config, "adjacency.csv");
    write_adjacency_csv(summed, adjacency.string());

    std::cout << "summed " << lookback << " of " << tensor.num_slices() << " slices as of "
              << format_date(panel.dates[static_cast<std::size_t>(span.end)]) << '\n';
    for (const auto& pair : pairs)
        std::cout << pair.leader << " -> " << pair.lagger << "  (strength " << pair.strength
                  << ")\n";
    std::cout << "wrote " << dot.string() << " and " << adjacency.string() << '\n';
    return 0;
}

std::vector<QuarterSelection> select_pairs(const RunConfig& config, const PricePanel& panel,
                                           const SpanIndices& span) {
    const ReturnsPanel returns = compute_returns(panel);
    const LeadLagTensor tensor =
        build_tensor(returns, config.detection, static_cast<int>(config.stride));
    return quarterly_selections(panel, returns, tensor, config.detection, config.capm,
                                config.selection, span.begin, span.end);
}

int cmd_select(const RunConfig& config) {
    LoadReport report;
    const PricePanel panel = load_inputs(config, &report);
    report_drops(report);
    const SpanIndices span = resolve_span(panel.dates, config.span);
    const auto selections = select_pairs(config, panel, span);

    const auto path = out_path(config, "selections.csv");
    write_selections_csv(panel, selections, path.string());
    for (const auto& selection : selections) {
        std::cout << format_date(panel.dates[static_cast<std::size_t>(selection.date_index)])
                  << ": " << selection.pairs.size() << " pairs\n";
        for (const auto& scored : selection.pairs)
            std::cout << "  " << scored.pair.leader << " -> " << scored.pair.lagger
                      << "  blended " << format_double(scored.blended) << '\n';
    }
    std::cout << "wrote " << path.string() << '\n';
    return 0;
}

int cmd_backtest(const RunConfig& config) {
    LoadReport report;
    const PricePanel panel = load_inputs(config, &report);
    report_drops(report);
    const SpanIndices span = resolve_span(panel.dates, config.span);
    const auto selections = select_pairs(config, panel, span);
    const BacktestResult result =
        run_backtest(panel, selections, config.strategy, span.begin, span.end);

    const auto ledger = out_path(config, "ledger.csv");
    write_ledger_csv(result, ledger.string());

    std::ostringstream summary;
    summary << "span: " << format_date(result.dates.front()) << " .. "
            << format_date(result.dates.back()) << '\n';
    summary << "initial capital: " << format_double(config.strategy.initial_capital) << '\n';
    summary << "final value: "
            << format_double(result.daily_values(result.daily_values.size() - 1)) << '\n';
    summary << "portfolio return: " << format_double(result.portfolio_return) << '\n';
    int buys = 0;
    for (const auto& trade : result.trades)
        if (trade.action == TradeAction::buy) ++buys;
    summary << "trades: " << result.trades.size() << " (" << buys << " buys, "
            << result.trades.size() - static_cast<std::size_t>(buys) << " sells), skipped: "
            << result.skipped.size() << '\n';

    if (panel.benchmark) {
        const Eigen::Index len = span.end - span.begin + 1;
        const PerformanceReport perf =
            evaluate_performance(result, panel.benchmark->segment(span.begin, len));
        const auto daily = out_path(config, "daily_values.csv");
        write_daily_values_csv(perf, daily.string());
        summary << "benchmark return: " << format_double(perf.benchmark_return) << '\n';
        summary << "excess return: " << format_double(perf.excess_return) << '\n';
    }

    const auto summary_path = out_path(config, "summary.txt");
    std::ofstream out(summary_path);
    if (!out) throw DataError("cannot open " + summary_path.string() + " for writing");
    out << summary.str();
    std::cout << summary.str();
    std::cout << "wrote " << ledger.string() << '\n';
    return 0;
}

int cmd_sweep(const RunConfig& config) {
    LoadReport report;
    const PricePanel panel = load_inputs(config, &report);
    report_drops(report);
    const SpanIndices span = resolve_span(panel.dates, config.span);
    const auto selections = select_pairs(config, panel, span);

    SweepSpec spec;
    spec.buy_thresholds = config.sweep_buy_thresholds;
    spec.trailing_stops = config.sweep_trailing_stops;
    spec.base = config.strategy;
    const SweepGrid grid = run_sweep(panel, selections, spec, span.begin, span.end);

    const auto path = out_path(config, "sweep.csv");
    write_contour_csv(grid, path.string());

    Eigen::Index best_row = 0, best_col = 0;
    grid.returns.maxCoeff(&best_row, &best_col);
    std::cout << "swept " << grid.returns.rows() << "x" << grid.returns.cols() << " grid; best "
              << "return " << format_double(grid.returns(best_row, best_col)) << " at stop "
              << format_double(grid.trailing_stops[static_cast<std::size_t>(best_row)])
              << ", threshold "
              << format_double(grid.buy_thresholds[static_cast<std::size_t>(best_col)]) << '\n';
    std::cout << "wrote " << path.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lead-lag network strategy toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir, span_text, stop_mode_text, prices_path, benchmark_path;
    double buy_threshold = 0.0, trailing_stop = 0.0;
    std::uint64_t seed = 0;

    auto* opt_config = app.add_option("--config", config_path, "config file (key = value lines)");
    auto* opt_out = app.add_option("--out", out_dir, "output directory (default: out)");
    auto* opt_span = app.add_option("--span", span_text, "date window START:END, either side open");
    auto* opt_stop_mode =
        app.add_option("--stop-mode", stop_mode_text, "trailing-max or prev-close");
    auto* opt_buy =
        app.add_option("--buy-threshold", buy_threshold, "leader day-over-day buy trigger ratio");
    auto* opt_stop =
        app.add_option("--trailing-stop", trailing_stop, "leader drawdown sell trigger fraction");
    auto* opt_prices = app.add_option("--prices", prices_path, "price CSV (date,ticker,close)");
    auto* opt_benchmark =
        app.add_option("--benchmark", benchmark_path, "benchmark CSV (date,close)");
    auto* opt_seed = app.add_option("--seed", seed, "synthetic data seed");

    auto* synth = app.add_subcommand("synth", "generate a synthetic price panel");
    auto* network = app.add_subcommand("network", "export the lead-lag network (DOT + CSV)");
    auto* select = app.add_subcommand("select", "list quarterly pair selections");
    auto* backtest = app.add_subcommand("backtest", "run the strategy over the span");
    auto* sweep = app.add_subcommand("sweep", "grid-sweep buy threshold and trailing stop");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        RunConfig config =
            opt_config->count() ? parse_config_file(config_path) : default_config();
        if (opt_out->count()) config.out_dir = out_dir;
        if (opt_span->count()) config.span = parse_span(span_text);
        if (opt_stop_mode->count()) {
            if (stop_mode_text == "trailing-max")
                config.strategy.stop_mode = StopMode::trailing_max;
            else if (stop_mode_text == "prev-close")
                config.strategy.stop_mode = StopMode::prev_close;
            else
                throw ConfigError("--stop-mode must be trailing-max or prev-close, got '" +
                                  stop_mode_text + "'");
        }
        if (opt_buy->count()) config.strategy.buy_threshold = buy_threshold;
        if (opt_stop->count()) config.strategy.trailing_stop = trailing_stop;
        if (opt_prices->count()) config.prices_path = prices_path;
        if (opt_benchmark->count()) config.benchmark_path = benchmark_path;
        if (opt_seed->count()) config.synth.seed = seed;

        if (synth->parsed()) return cmd_synth(config);
        if (network->parsed()) return cmd_network(config);
        if (select->parsed()) return cmd_select(config);
        if (backtest->parsed()) return cmd_backtest(config);
        if (sweep->parsed()) return cmd_sweep(config);
        return 2;  // unreachable: require_subcommand
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    }
}
