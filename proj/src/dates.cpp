#include "leadlag/dates.hpp"

#include <algorithm>
#include <cstdio>

#include "leadlag/errors.hpp"

namespace leadlag {

Date parse_date(const std::string& text) {
    int y = 0;
    unsigned m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d-%u-%u%c", &y, &m, &d, &tail) != 3) {
        throw DataError("malformed date '" + text + "' (expected YYYY-MM-DD)");
    }
    Date date(y, m, d);
    if (!date.valid()) {
        throw DataError("impossible date '" + text + "'");
    }
    return date;
}

std::string format_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", date.year(), date.month(), date.day());
    return buf;
}

bool is_weekend(const Date& date) {
    std::chrono::weekday wd{std::chrono::sys_days{date.ymd}};
    return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

std::size_t first_on_or_after(const std::vector<Date>& dates, const Date& target) {
    auto it = std::lower_bound(dates.begin(), dates.end(), target);
    return static_cast<std::size_t>(it - dates.begin());
}

}  // namespace leadlag
