#pragma once

// Shared scaffolding for the unit tests: scratch files, weekday calendars,
// and small random panels for property checks.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "leadlag/dates.hpp"
#include "leadlag/panel.hpp"

namespace testutil {

// Writes `text` to a fresh file under the system temp directory and removes
// it when the object goes out of scope.
class ScratchFile {
  public:
    explicit ScratchFile(const std::string& text, const std::string& stem = "leadlag_test") {
        static int counter = 0;
        path_ = (std::filesystem::temp_directory_path() /
                 (stem + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) +
                  ".csv"))
                    .string();
        std::ofstream out(path_, std::ios::binary);
        out << text;
    }
    ~ScratchFile() { std::remove(path_.c_str()); }
    ScratchFile(const ScratchFile&) = delete;
    ScratchFile& operator=(const ScratchFile&) = delete;

    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

inline leadlag::Date next_day(const leadlag::Date& date) {
    using namespace std::chrono;
    const sys_days days{date.ymd};
    leadlag::Date next;
    next.ymd = year_month_day{days + std::chrono::days{1}};
    return next;
}

// All weekdays in [first, last], inclusive.
inline std::vector<leadlag::Date> weekday_calendar(leadlag::Date first, leadlag::Date last) {
    std::vector<leadlag::Date> dates;
    for (leadlag::Date d = first; !(last < d); d = next_day(d))
        if (!leadlag::is_weekend(d)) dates.push_back(d);
    return dates;
}

// Small positive random panel (weekday dates, lexicographic tickers) for
// property tests; prices are geometric walks so returns stay moderate.
inline leadlag::PricePanel random_panel(std::mt19937_64& rng, int n_tickers, int n_days,
                                        bool with_benchmark = true) {
    leadlag::PricePanel panel;
    panel.dates = weekday_calendar(leadlag::Date(2022, 1, 3), leadlag::Date(2023, 12, 29));
    panel.dates.resize(static_cast<std::size_t>(n_days));
    std::uniform_real_distribution<double> step(-0.03, 0.03);
    char name[8];
    for (int j = 0; j < n_tickers; ++j) {
        std::snprintf(name, sizeof name, "T%02d", j);
        panel.tickers.push_back(name);
    }
    panel.closes.resize(n_days, n_tickers);
    for (int j = 0; j < n_tickers; ++j) {
        double price = 50.0 + 10.0 * j;
        for (int i = 0; i < n_days; ++i) {
            panel.closes(i, j) = price;
            price *= 1.0 + step(rng);
        }
    }
    if (with_benchmark) {
        Eigen::VectorXd bench(n_days);
        double level = 1000.0;
        for (int i = 0; i < n_days; ++i) {
            bench(i) = level;
            level *= 1.0 + step(rng) / 3.0;
        }
        panel.benchmark = bench;
    }
    return panel;
}

}  // namespace testutil
