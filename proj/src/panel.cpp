#include "leadlag/panel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "leadlag/errors.hpp"

namespace leadlag {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type pos = 0;
    while (true) {
        auto comma = line.find(',', pos);
        if (comma == std::string::npos) {
            fields.push_back(trim(line.substr(pos)));
            break;
        }
        fields.push_back(trim(line.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return fields;
}

double parse_double_field(const std::string& text, const std::string& path, std::size_t line_no) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw DataError(path + ":" + std::to_string(line_no) + ": malformed number '" + text + "'");
    }
    return value;
}

}  // namespace

Eigen::Index PricePanel::ticker_index(const std::string& ticker) const {
    auto it = std::find(tickers.begin(), tickers.end(), ticker);
    if (it == tickers.end()) throw DataError("unknown ticker '" + ticker + "'");
    return static_cast<Eigen::Index>(it - tickers.begin());
}

bool PricePanel::operator==(const PricePanel& other) const {
    if (dates != other.dates || tickers != other.tickers) return false;
    if (closes.rows() != other.closes.rows() || closes.cols() != other.closes.cols()) return false;
    if (closes.size() > 0 && !(closes.array() == other.closes.array()).all()) return false;
    if (benchmark.has_value() != other.benchmark.has_value()) return false;
    if (benchmark && !(benchmark->array() == other.benchmark->array()).all()) return false;
    return true;
}

PricePanel load_price_panel(const std::string& path, const GapPolicy& policy, LoadReport* report) {
    if (policy.max_forward_fill < 0) throw ConfigError("max_forward_fill must be >= 0");
    if (policy.drop_ticker_above < 0.0 || policy.drop_ticker_above > 1.0) {
        throw ConfigError("drop_ticker_above must be in [0, 1]");
    }

    std::ifstream in(path);
    if (!in) throw DataError("cannot open price file '" + path + "'");

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    ++line_no;
    if (split_csv_line(line) != std::vector<std::string>{"date", "ticker", "close"}) {
        throw DataError(path + ":1: expected header 'date,ticker,close'");
    }

    struct Row {
        Date date;
        std::string ticker;
        double close;
    };
    std::vector<Row> rows;
    std::set<Date> date_set;
    std::set<std::string> ticker_set;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 3) {
            throw DataError(path + ":" + std::to_string(line_no) + ": expected 3 fields, got " +
                            std::to_string(fields.size()));
        }
        Row row;
        try {
            row.date = parse_date(fields[0]);
        } catch (const DataError& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        row.ticker = fields[1];
        if (row.ticker.empty()) {
            throw DataError(path + ":" + std::to_string(line_no) + ": empty ticker");
        }
        row.close = parse_double_field(fields[2], path, line_no);
        if (!std::isfinite(row.close) || row.close <= 0.0) {
            throw DataError(path + ":" + std::to_string(line_no) + ": non-positive price for " +
                            row.ticker + " on " + format_date(row.date));
        }
        date_set.insert(row.date);
        ticker_set.insert(row.ticker);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError(path + ": no data rows");

    std::vector<Date> dates(date_set.begin(), date_set.end());
    std::vector<std::string> tickers(ticker_set.begin(), ticker_set.end());
    const auto n_dates = static_cast<Eigen::Index>(dates.size());
    const auto n_tickers = static_cast<Eigen::Index>(tickers.size());

    std::map<Date, Eigen::Index> date_index;
    for (Eigen::Index i = 0; i < n_dates; ++i) date_index[dates[i]] = i;
    std::map<std::string, Eigen::Index> ticker_index;
    for (Eigen::Index j = 0; j < n_tickers; ++j) ticker_index[tickers[j]] = j;

    Eigen::MatrixXd grid = Eigen::MatrixXd::Constant(n_dates, n_tickers, kNaN);
    for (const auto& row : rows) {
        auto& cell = grid(date_index[row.date], ticker_index[row.ticker]);
        if (!std::isnan(cell)) {
            throw DataError(path + ": duplicate row for " + row.ticker + " on " +
                            format_date(row.date));
        }
        cell = row.close;
    }

    // Bounded forward fill, then the two drop rules.
    std::vector<Eigen::Index> raw_missing(n_tickers, 0);
    for (Eigen::Index j = 0; j < n_tickers; ++j) {
        double last = kNaN;
        int run = 0;
        for (Eigen::Index i = 0; i < n_dates; ++i) {
            if (std::isnan(grid(i, j))) {
                ++raw_missing[j];
                ++run;
                if (!std::isnan(last) && run <= policy.max_forward_fill) {
                    grid(i, j) = last;
                    if (report) ++report->filled_cells;
                }
            } else {
                last = grid(i, j);
                run = 0;
            }
        }
    }

    std::vector<Eigen::Index> kept;
    for (Eigen::Index j = 0; j < n_tickers; ++j) {
        double missing_fraction = double(raw_missing[j]) / double(n_dates);
        if (missing_fraction > policy.drop_ticker_above) {
            if (report) report->dropped_high_missing.push_back(tickers[j]);
            continue;
        }
        if (grid.col(j).array().isNaN().any()) {
            if (report) report->dropped_unfillable.push_back(tickers[j]);
            continue;
        }
        kept.push_back(j);
    }
    if (kept.empty()) throw DataError(path + ": empty universe after gap-policy drops");

    PricePanel panel;
    panel.dates = std::move(dates);
    panel.tickers.reserve(kept.size());
    panel.closes.resize(n_dates, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t k = 0; k < kept.size(); ++k) {
        panel.tickers.push_back(tickers[kept[k]]);
        panel.closes.col(static_cast<Eigen::Index>(k)) = grid.col(kept[k]);
    }
    return panel;
}

BenchmarkSeries load_benchmark_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open benchmark file '" + path + "'");

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    ++line_no;
    if (split_csv_line(line) != std::vector<std::string>{"date", "close"}) {
        throw DataError(path + ":1: expected header 'date,close'");
    }

    std::map<Date, double> levels;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 2) {
            throw DataError(path + ":" + std::to_string(line_no) + ": expected 2 fields, got " +
                            std::to_string(fields.size()));
        }
        Date date;
        try {
            date = parse_date(fields[0]);
        } catch (const DataError& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        double close = parse_double_field(fields[1], path, line_no);
        if (!std::isfinite(close) || close <= 0.0) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": non-positive benchmark level on " + format_date(date));
        }
        if (!levels.emplace(date, close).second) {
            throw DataError(path + ": duplicate benchmark row for " + format_date(date));
        }
    }
    if (levels.empty()) throw DataError(path + ": no data rows");

    BenchmarkSeries series;
    series.dates.reserve(levels.size());
    series.closes.resize(static_cast<Eigen::Index>(levels.size()));
    Eigen::Index i = 0;
    for (const auto& [date, close] : levels) {
        series.dates.push_back(date);
        series.closes[i++] = close;
    }
    return series;
}

PricePanel align_calendars(const PricePanel& panel, const BenchmarkSeries& series) {
    if (panel.dates.empty() || series.dates.empty()) {
        throw DataError("align_calendars: empty input");
    }
    std::vector<Date> shared;
    std::set_intersection(panel.dates.begin(), panel.dates.end(), series.dates.begin(),
                          series.dates.end(), std::back_inserter(shared));
    if (shared.empty()) throw DataError("align_calendars: no shared trading dates");

    PricePanel out;
    out.dates = shared;
    out.tickers = panel.tickers;
    const auto n = static_cast<Eigen::Index>(shared.size());
    out.closes.resize(n, panel.num_tickers());
    Eigen::VectorXd bench(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        auto pi = first_on_or_after(panel.dates, shared[static_cast<std::size_t>(i)]);
        auto si = first_on_or_after(series.dates, shared[static_cast<std::size_t>(i)]);
        out.closes.row(i) = panel.closes.row(static_cast<Eigen::Index>(pi));
        bench[i] = series.closes[static_cast<Eigen::Index>(si)];
    }
    out.benchmark = std::move(bench);
    return out;
}

ReturnsPanel compute_returns(const PricePanel& panel) {
    if (panel.num_dates() < 2) throw DataError("compute_returns: need at least two dates");
    const auto n = panel.num_dates() - 1;

    ReturnsPanel out;
    out.dates.assign(panel.dates.begin() + 1, panel.dates.end());
    out.tickers = panel.tickers;
    out.returns =
        (panel.closes.bottomRows(n).array() / panel.closes.topRows(n).array() - 1.0).matrix();
    if (panel.benchmark) {
        out.benchmark_returns =
            (panel.benchmark->tail(n).array() / panel.benchmark->head(n).array() - 1.0).matrix();
    }
    return out;
}

namespace {

// Deterministic standard normals: Box-Muller over raw mt19937_64 draws, so
// streams do not depend on the standard library's distribution internals.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double next() {
        // u1 in (0, 1], u2 in [0, 1)
        double u1 = (double((engine_() >> 11)) + 1.0) * 0x1.0p-53;
        double u2 = double(engine_() >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

private:
    std::mt19937_64 engine_;
};

std::vector<Date> weekday_calendar(Date start, int count) {
    std::vector<Date> dates;
    dates.reserve(static_cast<std::size_t>(count));
    std::chrono::sys_days day{start.ymd};
    while (static_cast<int>(dates.size()) < count) {
        Date d;
        d.ymd = std::chrono::year_month_day{day};
        if (!is_weekend(d)) dates.push_back(d);
        day += std::chrono::days{1};
    }
    return dates;
}

}  // namespace

PricePanel generate_synthetic_panel(const SynthSpec& spec) {
    if (spec.num_tickers < 1 || spec.num_days < 1) {
        throw ConfigError("synthetic panel needs at least one ticker and one day");
    }
    if (spec.start_price <= 0.0) throw ConfigError("synthetic start price must be > 0");
    auto broadcast = [&](const std::vector<double>& per_ticker, double scalar) {
        if (per_ticker.empty()) {
            return std::vector<double>(static_cast<std::size_t>(spec.num_tickers), scalar);
        }
        if (static_cast<int>(per_ticker.size()) != spec.num_tickers) {
            throw ConfigError("per-ticker drift/volatility list must match universe size");
        }
        return per_ticker;
    };
    const auto drifts = broadcast(spec.per_ticker_drift, spec.drift);
    const auto vols = broadcast(spec.per_ticker_volatility, spec.volatility);

    PricePanel panel;
    panel.dates = weekday_calendar(spec.start_date, spec.num_days);
    int width = spec.num_tickers > 1000 ? 4 : 3;
    for (int j = 0; j < spec.num_tickers; ++j) {
        char name[16];
        std::snprintf(name, sizeof name, "S%0*d", width, j);
        panel.tickers.emplace_back(name);
    }

    NormalStream normals(spec.seed);
    panel.closes.resize(spec.num_days, spec.num_tickers);
    panel.closes.row(0).setConstant(spec.start_price);
    for (int t = 1; t < spec.num_days; ++t) {
        for (int j = 0; j < spec.num_tickers; ++j) {
            double step = 1.0 + drifts[static_cast<std::size_t>(j)] +
                          vols[static_cast<std::size_t>(j)] * normals.next();
            panel.closes(t, j) = panel.closes(t - 1, j) * std::max(step, 0.01);
        }
    }

    if (spec.with_benchmark) {
        Eigen::VectorXd bench(spec.num_days);
        bench[0] = 1000.0;
        for (int t = 1; t < spec.num_days; ++t) {
            double step = 1.0 + spec.benchmark_drift + spec.benchmark_volatility * normals.next();
            bench[t] = bench[t - 1] * std::max(step, 0.01);
        }
        panel.benchmark = std::move(bench);
    }
    return panel;
}

std::string format_double(double x) {
    // Both forms are shortest-round-trip; fixed just reads better for the
    // magnitudes that show up in price data (500000, not 5e+05).
    char buf[64];
    const double magnitude = std::abs(x);
    const bool mid_range = x == 0.0 || (magnitude >= 1e-4 && magnitude < 1e15);
    auto result = mid_range ? std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed)
                            : std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, result.ptr);
}

void write_price_csv(const PricePanel& panel, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "date,ticker,close\n";
    for (Eigen::Index i = 0; i < panel.num_dates(); ++i) {
        for (Eigen::Index j = 0; j < panel.num_tickers(); ++j) {
            out << format_date(panel.dates[static_cast<std::size_t>(i)]) << ','
                << panel.tickers[static_cast<std::size_t>(j)] << ','
                << format_double(panel.closes(i, j)) << '\n';
        }
    }
    if (!out) throw DataError("write failed for '" + path + "'");
}

void write_benchmark_csv(const PricePanel& panel, const std::string& path) {
    if (!panel.benchmark) throw DataError("panel has no benchmark series");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "date,close\n";
    for (Eigen::Index i = 0; i < panel.num_dates(); ++i) {
        out << format_date(panel.dates[static_cast<std::size_t>(i)]) << ','
            << format_double((*panel.benchmark)[i]) << '\n';
    }
    if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace leadlag
