#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace leadlag {

// Calendar date (no time of day, no time zone). Thin value wrapper around
// std::chrono so panels can sort, compare and serialize trading days.
struct Date {
    std::chrono::year_month_day ymd{};

    Date() = default;
    Date(int year, unsigned month, unsigned day)
        : ymd(std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}) {}

    int year() const { return int(ymd.year()); }
    unsigned month() const { return unsigned(ymd.month()); }
    unsigned day() const { return unsigned(ymd.day()); }
    bool valid() const { return ymd.ok(); }

    auto operator<=>(const Date&) const = default;
};

// Parses "YYYY-MM-DD"; throws DataError on malformed text or impossible dates.
Date parse_date(const std::string& text);

std::string format_date(const Date& date);

bool is_weekend(const Date& date);

// Index of the first element >= target, or dates.size() if none.
std::size_t first_on_or_after(const std::vector<Date>& dates, const Date& target);

}  // namespace leadlag
