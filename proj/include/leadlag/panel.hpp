#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "leadlag/dates.hpp"

namespace leadlag {

// Missing-cell handling for loaded price data. A ticker is dropped when its
// raw missing fraction exceeds drop_ticker_above, or when a gap survives the
// bounded forward-fill (leading gap, or a run longer than max_forward_fill).
struct GapPolicy {
    int max_forward_fill = 5;
    double drop_ticker_above = 0.1;
};

// Date-aligned daily closes. Rows are trading days (strictly increasing),
// columns are tickers (lexicographic). Every cell is finite and > 0.
struct PricePanel {
    std::vector<Date> dates;
    std::vector<std::string> tickers;
    Eigen::MatrixXd closes;                    // [date x ticker]
    std::optional<Eigen::VectorXd> benchmark;  // index level per date

    Eigen::Index num_dates() const { return static_cast<Eigen::Index>(dates.size()); }
    Eigen::Index num_tickers() const { return static_cast<Eigen::Index>(tickers.size()); }

    // Column of the given symbol; throws DataError if unknown.
    Eigen::Index ticker_index(const std::string& ticker) const;

    bool operator==(const PricePanel& other) const;
};

// Simple daily returns: returns(k, i) = closes(k+1, i) / closes(k, i) - 1.
// Row k is stamped with the date the return realizes (source date k+1), so
// the panel is one row shorter than its source.
struct ReturnsPanel {
    std::vector<Date> dates;
    std::vector<std::string> tickers;
    Eigen::MatrixXd returns;
    std::optional<Eigen::VectorXd> benchmark_returns;

    Eigen::Index num_dates() const { return static_cast<Eigen::Index>(dates.size()); }
    Eigen::Index num_tickers() const { return static_cast<Eigen::Index>(tickers.size()); }
};

// Benchmark index levels keyed by date, as loaded from a two-column CSV.
struct BenchmarkSeries {
    std::vector<Date> dates;
    Eigen::VectorXd closes;
};

// What load_price_panel did to the raw file.
struct LoadReport {
    std::vector<std::string> dropped_high_missing;  // missing fraction above policy
    std::vector<std::string> dropped_unfillable;    // gap survived bounded fill
    std::int64_t filled_cells = 0;
};

// Loads a long-form CSV (header "date,ticker,close") into a validated panel.
// Forward-fills gaps up to policy.max_forward_fill days, then drops tickers
// that violate the policy (recorded in *report when given). Throws DataError
// on malformed rows (with line number), non-positive prices, duplicate
// (date, ticker) rows, or an empty universe after drops.
PricePanel load_price_panel(const std::string& path, const GapPolicy& policy,
                            LoadReport* report = nullptr);

// Loads a two-column CSV (header "date,close").
BenchmarkSeries load_benchmark_csv(const std::string& path);

// Restricts the panel to dates shared with the series and attaches the
// benchmark levels. Idempotent. Throws DataError on an empty intersection.
PricePanel align_calendars(const PricePanel& panel, const BenchmarkSeries& series);

// Throws DataError when the panel has fewer than two dates.
ReturnsPanel compute_returns(const PricePanel& panel);

// Geometric random walk generator for test and demo data. Daily return of
// ticker i is drift[i] + volatility[i] * z with z standard normal drawn from
// a seeded mt19937_64 (Box-Muller, so streams are identical across
// platforms). Multipliers are floored at 0.01 to keep prices positive.
struct SynthSpec {
    int num_tickers = 8;
    int num_days = 260;
    double drift = 0.0005;       // broadcast when the per-ticker lists are empty
    double volatility = 0.01;
    std::vector<double> per_ticker_drift;
    std::vector<double> per_ticker_volatility;
    double start_price = 100.0;
    std::uint64_t seed = 1;
    bool with_benchmark = true;
    double benchmark_drift = 0.0003;
    double benchmark_volatility = 0.008;
    Date start_date = Date(2022, 1, 3);
};

PricePanel generate_synthetic_panel(const SynthSpec& spec);

// Long-form price CSV, rows sorted by date then ticker. Floats are written
// shortest-round-trip, so write/load round-trips bit-exactly.
void write_price_csv(const PricePanel& panel, const std::string& path);

// Two-column benchmark CSV; requires panel.benchmark.
void write_benchmark_csv(const PricePanel& panel, const std::string& path);

// Shortest representation of x that parses back to the same double.
std::string format_double(double x);

}  // namespace leadlag
