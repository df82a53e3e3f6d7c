#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace rankskew {

using Date = std::chrono::year_month_day;

/// Strict ISO-8601 calendar date `YYYY-MM-DD`; nullopt on any deviation
/// (wrong width, non-digits, impossible day such as 2021-02-30).
std::optional<Date> parse_date(std::string_view text);

std::string format_date(const Date& d);

Date month_end(const Date& d);

inline bool same_month(const Date& a, const Date& b) {
    return a.year() == b.year() && a.month() == b.month();
}

inline Date add_days(const Date& d, int days) {
    return Date{std::chrono::sys_days{d} + std::chrono::days{days}};
}

}  // namespace rankskew
