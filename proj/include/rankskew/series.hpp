#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rankskew/date.hpp"
#include "rankskew/error.hpp"

namespace rankskew {

enum class Period { daily, monthly };

std::string_view to_string(Period p) noexcept;

/// 252 trading days or 12 months per year.
double periods_per_year(Period p) noexcept;

/// Year fraction accrued per step: 1/252 (daily) or 1/12 (monthly).
double accrual_fraction(Period p) noexcept;

/// Dated arithmetic returns. Dates are strictly increasing and every value
/// is finite; both are checked on construction. Stored column-wise so
/// multi-million point series can be scanned without touching the dates.
class ReturnSeries {
public:
    ReturnSeries(std::string label, Period period, std::vector<Date> dates,
                 std::vector<double> values);

    /// Values on consecutive synthetic dates: calendar days from `start`
    /// (daily) or successive month ends (monthly).
    static ReturnSeries from_values(std::string label, Period period, std::vector<double> values,
                                    Date start = Date{std::chrono::year{1900}, std::chrono::January,
                                                      std::chrono::day{1}});

    const std::string& label() const noexcept { return label_; }
    Period period() const noexcept { return period_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const Date> dates() const noexcept { return dates_; }
    const Date& date(std::size_t i) const { return dates_.at(i); }
    double value(std::size_t i) const { return values_.at(i); }

    ReturnSeries with_values(std::vector<double> values) const;
    ReturnSeries with_label(std::string label) const;

    friend bool operator==(const ReturnSeries&, const ReturnSeries&) = default;

private:
    std::string label_;
    Period period_;
    std::vector<Date> dates_;
    std::vector<double> values_;
};

/// Annualized rates (fraction per year), strictly increasing dates.
class RateSeries {
public:
    RateSeries(std::string label, std::vector<Date> dates, std::vector<double> rates);

    const std::string& label() const noexcept { return label_; }
    std::size_t size() const noexcept { return rates_.size(); }
    std::span<const Date> dates() const noexcept { return dates_; }
    std::span<const double> rates() const noexcept { return rates_; }

    /// Last known rate at or before `d`; nullopt when `d` precedes the history.
    std::optional<double> rate_at(const Date& d) const;

private:
    std::string label_;
    std::vector<Date> dates_;
    std::vector<double> rates_;
};

struct StandardizedSeries {
    ReturnSeries series;
    double mean = 0.0;   ///< mean of the original returns
    double scale = 1.0;  ///< population standard deviation of the original returns
};

struct PerfStats {
    double ann_vol = 0.0;
    double ann_return = 0.0;
    double sharpe = 0.0;
    double t_stat = 0.0;
    std::size_t n_periods = 0;
};

// Plain-vector kernels shared by the estimators.
double mean_of(std::span<const double> x);
/// Population (divide-by-N) variance.
double population_variance(std::span<const double> x, double mean);

struct Standardized {
    std::vector<double> z;
    double mean = 0.0;
    double scale = 1.0;
};

/// Zero mean, unit population variance. Throws TooShort / ZeroVariance.
Standardized standardize_values(std::span<const double> x);

StandardizedSeries standardize(const ReturnSeries& s);

ReturnSeries excess_returns(const ReturnSeries& asset, const RateSeries& funding);

ReturnSeries aggregate_monthly(const ReturnSeries& daily);

/// Volatility-targeted series: each return divided by the previous day's
/// EMA-of-|r| volatility proxy (scaled by sqrt(pi/2)), floored at the
/// running 10th percentile of the proxy. The first `span` points are
/// consumed as warm-up.
ReturnSeries risk_manage(const ReturnSeries& s, std::size_t span = 20);

/// m + eps_t (r_t - m) with eps_t = +/-1 drawn from `seed`.
ReturnSeries symmetrize(const ReturnSeries& s, std::uint64_t seed);
ReturnSeries symmetrize_with_signs(const ReturnSeries& s, std::span<const double> signs);
std::vector<double> symmetrize_values(std::span<const double> x, std::uint64_t seed);

PerfStats perf_stats(const ReturnSeries& s);

ReturnSeries equal_weight_aggregate(std::span<const ReturnSeries> series);

}  // namespace rankskew
