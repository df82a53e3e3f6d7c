#include "rankskew/series.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <queue>

#include "rankskew/random.hpp"

namespace rankskew {

std::string_view to_string(Period p) noexcept {
    return p == Period::daily ? "daily" : "monthly";
}

double periods_per_year(Period p) noexcept { return p == Period::daily ? 252.0 : 12.0; }

double accrual_fraction(Period p) noexcept { return 1.0 / periods_per_year(p); }

namespace {

void check_dates(std::span<const Date> dates, const std::string& label) {
    for (std::size_t i = 1; i < dates.size(); ++i) {
        if (!(dates[i - 1] < dates[i])) {
            throw Error(ErrorCode::InvalidSeries, "series '" + label + "': date " +
                                                      format_date(dates[i]) +
                                                      " does not strictly follow " +
                                                      format_date(dates[i - 1]));
        }
    }
}

void check_finite(std::span<const double> values, std::span<const Date> dates,
                  const std::string& label) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw Error(ErrorCode::InvalidSeries,
                        "series '" + label + "': non-finite value at " + format_date(dates[i]));
        }
    }
}

// Neumaier-compensated sum; keeps the standardized mean at rounding level for
// series of 1e7 points.
double compensated_sum(std::span<const double> x) {
    double sum = 0.0;
    double c = 0.0;
    for (double v : x) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    return sum + c;
}

}  // namespace

ReturnSeries::ReturnSeries(std::string label, Period period, std::vector<Date> dates,
                           std::vector<double> values)
    : label_(std::move(label)), period_(period), dates_(std::move(dates)),
      values_(std::move(values)) {
    if (dates_.size() != values_.size()) {
        throw Error(ErrorCode::InvalidSeries, "series '" + label_ + "': dates/values size mismatch");
    }
    if (values_.empty()) throw Error(ErrorCode::EmptyInput, "series '" + label_ + "' is empty");
    check_dates(dates_, label_);
    check_finite(values_, dates_, label_);
}

ReturnSeries ReturnSeries::from_values(std::string label, Period period, std::vector<double> values,
                                       Date start) {
    std::vector<Date> dates;
    dates.reserve(values.size());
    if (period == Period::daily) {
        const std::chrono::sys_days d0{start};
        for (std::size_t i = 0; i < values.size(); ++i) {
            dates.emplace_back(d0 + std::chrono::days{static_cast<long>(i)});
        }
    } else {
        std::chrono::year_month ym{start.year(), start.month()};
        for (std::size_t i = 0; i < values.size(); ++i) {
            dates.push_back(month_end(Date{ym / std::chrono::day{1}}));
            ym += std::chrono::months{1};
        }
    }
    return ReturnSeries(std::move(label), period, std::move(dates), std::move(values));
}

ReturnSeries ReturnSeries::with_values(std::vector<double> values) const {
    return ReturnSeries(label_, period_, dates_, std::move(values));
}

ReturnSeries ReturnSeries::with_label(std::string label) const {
    ReturnSeries out = *this;
    out.label_ = std::move(label);
    return out;
}

RateSeries::RateSeries(std::string label, std::vector<Date> dates, std::vector<double> rates)
    : label_(std::move(label)), dates_(std::move(dates)), rates_(std::move(rates)) {
    if (dates_.size() != rates_.size()) {
        throw Error(ErrorCode::InvalidSeries, "rates '" + label_ + "': dates/rates size mismatch");
    }
    if (rates_.empty()) throw Error(ErrorCode::EmptyInput, "rates '" + label_ + "' is empty");
    check_dates(dates_, label_);
    check_finite(rates_, dates_, label_);
}

std::optional<double> RateSeries::rate_at(const Date& d) const {
    const auto it = std::upper_bound(dates_.begin(), dates_.end(), d);
    if (it == dates_.begin()) return std::nullopt;
    return rates_[static_cast<std::size_t>(std::distance(dates_.begin(), it)) - 1];
}

double mean_of(std::span<const double> x) {
    if (x.empty()) throw Error(ErrorCode::EmptyInput, "mean of empty sample");
    return compensated_sum(x) / static_cast<double>(x.size());
}

double population_variance(std::span<const double> x, double mean) {
    double acc = 0.0;
    for (double v : x) acc += (v - mean) * (v - mean);
    return acc / static_cast<double>(x.size());
}

Standardized standardize_values(std::span<const double> x) {
    if (x.size() < 2) throw Error(ErrorCode::TooShort, "standardization needs at least 2 points");
    double m = mean_of(x);
    // Second pass removes the residual rounding of the first mean.
    {
        std::vector<double> d(x.size());
        std::transform(x.begin(), x.end(), d.begin(), [m](double v) { return v - m; });
        m += compensated_sum(d) / static_cast<double>(d.size());
    }
    const double var = population_variance(x, m);
    if (!(var > 0.0)) throw Error(ErrorCode::ZeroVariance, "all returns are equal");
    const double s = std::sqrt(var);
    Standardized out;
    out.mean = m;
    out.scale = s;
    out.z.resize(x.size());
    std::transform(x.begin(), x.end(), out.z.begin(), [m, s](double v) { return (v - m) / s; });
    return out;
}

StandardizedSeries standardize(const ReturnSeries& s) {
    auto st = standardize_values(s.values());
    return StandardizedSeries{s.with_values(std::move(st.z)), st.mean, st.scale};
}

ReturnSeries excess_returns(const ReturnSeries& asset, const RateSeries& funding) {
    const double dt = accrual_fraction(asset.period());
    std::vector<double> out(asset.size());
    for (std::size_t i = 0; i < asset.size(); ++i) {
        const auto rate = funding.rate_at(asset.date(i));
        if (!rate) {
            throw Error(ErrorCode::NoRateCoverage,
                        "no funding rate in '" + funding.label() + "' at or before " +
                            format_date(asset.date(i)));
        }
        out[i] = asset.value(i) - *rate * dt;
    }
    return asset.with_values(std::move(out));
}

ReturnSeries aggregate_monthly(const ReturnSeries& daily) {
    if (daily.period() != Period::daily) {
        throw Error(ErrorCode::WrongPeriod, "series '" + daily.label() + "' is already monthly");
    }
    std::vector<Date> dates;
    std::vector<double> values;
    const auto d = daily.dates();
    const auto r = daily.values();
    for (std::size_t i = 0; i < r.size();) {
        double sum = 0.0;
        std::size_t j = i;
        for (; j < r.size() && same_month(d[j], d[i]); ++j) sum += r[j];
        dates.push_back(month_end(d[i]));
        values.push_back(sum);
        i = j;
    }
    return ReturnSeries(daily.label(), Period::monthly, std::move(dates), std::move(values));
}

namespace {

// Order statistic of an expanding sample: the k-th smallest with
// k = max(1, ceil(q * n)) (nearest-rank definition).
class RunningQuantile {
public:
    explicit RunningQuantile(double q) : q_(q) {}

    void push(double v) {
        if (!low_.empty() && v <= low_.top()) {
            low_.push(v);
        } else {
            high_.push(v);
        }
        ++n_;
        const auto k = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(q_ * static_cast<double>(n_) - 1e-12)));
        while (low_.size() > k) {
            high_.push(low_.top());
            low_.pop();
        }
        while (low_.size() < k) {
            low_.push(high_.top());
            high_.pop();
        }
    }

    double value() const { return low_.top(); }

private:
    double q_;
    std::size_t n_ = 0;
    std::priority_queue<double> low_;
    std::priority_queue<double, std::vector<double>, std::greater<>> high_;
};

}  // namespace

ReturnSeries risk_manage(const ReturnSeries& s, std::size_t span) {
    if (s.period() != Period::daily) {
        throw Error(ErrorCode::WrongPeriod, "risk management expects a daily series");
    }
    if (span == 0 || s.size() <= span) {
        throw Error(ErrorCode::TooShort, "risk management needs more than " +
                                             std::to_string(span) + " points, got " +
                                             std::to_string(s.size()));
    }
    const auto r = s.values();
    const double alpha = 2.0 / (static_cast<double>(span) + 1.0);
    const double unbias = std::sqrt(std::numbers::pi / 2.0);

    // vol[t] is the floored proxy known at the close of day t.
    std::vector<double> vol(r.size());
    RunningQuantile floor(0.10);
    double ema = std::abs(r[0]);
    for (std::size_t t = 0; t < r.size(); ++t) {
        if (t > 0) ema = alpha * std::abs(r[t]) + (1.0 - alpha) * ema;
        const double raw = unbias * ema;
        floor.push(raw);
        vol[t] = std::max(raw, floor.value());
    }

    std::vector<Date> dates(s.dates().begin() + static_cast<std::ptrdiff_t>(span), s.dates().end());
    std::vector<double> out;
    out.reserve(r.size() - span);
    for (std::size_t t = span; t < r.size(); ++t) {
        if (!(vol[t - 1] > 0.0)) {
            throw Error(ErrorCode::ZeroVariance, "series '" + s.label() +
                                                     "': zero volatility estimate before " +
                                                     format_date(s.date(t)));
        }
        out.push_back(r[t] / vol[t - 1]);
    }
    return ReturnSeries(s.label(), s.period(), std::move(dates), std::move(out));
}

ReturnSeries symmetrize_with_signs(const ReturnSeries& s, std::span<const double> signs) {
    if (s.size() < 2) throw Error(ErrorCode::TooShort, "symmetrization needs at least 2 points");
    if (signs.size() != s.size()) {
        throw Error(ErrorCode::InvalidParams, "sign vector length differs from series length");
    }
    const double m = mean_of(s.values());
    std::vector<double> out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = m + signs[i] * (s.value(i) - m);
    return s.with_values(std::move(out));
}

std::vector<double> symmetrize_values(std::span<const double> x, std::uint64_t seed) {
    if (x.size() < 2) throw Error(ErrorCode::TooShort, "symmetrization needs at least 2 points");
    const double m = mean_of(x);
    auto rng = make_rng(seed, Stream::symmetrize);
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = m + random_sign(rng) * (x[i] - m);
    return out;
}

ReturnSeries symmetrize(const ReturnSeries& s, std::uint64_t seed) {
    return s.with_values(symmetrize_values(s.values(), seed));
}

PerfStats perf_stats(const ReturnSeries& s) {
    if (s.size() < 2) throw Error(ErrorCode::TooShort, "performance statistics need 2 points");
    const auto r = s.values();
    const double m = mean_of(r);
    const double sd = std::sqrt(population_variance(r, m));
    if (!(sd > 0.0)) throw Error(ErrorCode::ZeroVariance, "series '" + s.label() + "' is constant");
    const double a = periods_per_year(s.period());
    PerfStats p;
    p.n_periods = s.size();
    p.ann_vol = sd * std::sqrt(a);
    p.ann_return = m * a;
    p.sharpe = p.ann_return / p.ann_vol;
    p.t_stat = p.sharpe * std::sqrt(static_cast<double>(s.size()) / a);
    return p;
}

ReturnSeries equal_weight_aggregate(std::span<const ReturnSeries> series) {
    if (series.empty()) throw Error(ErrorCode::EmptyInput, "no series to aggregate");
    const Period period = series.front().period();
    struct Acc {
        double mean = 0.0;
        std::size_t n = 0;
    };
    std::map<std::chrono::sys_days, Acc> by_date;
    for (const auto& s : series) {
        if (s.period() != period) {
            throw Error(ErrorCode::WrongPeriod, "series '" + s.label() + "' has a different period");
        }
        for (std::size_t i = 0; i < s.size(); ++i) {
            auto& acc = by_date[std::chrono::sys_days{s.date(i)}];
            ++acc.n;
            // Running mean: exact for identical inputs.
            acc.mean += (s.value(i) - acc.mean) / static_cast<double>(acc.n);
        }
    }
    std::vector<Date> dates;
    std::vector<double> values;
    dates.reserve(by_date.size());
    values.reserve(by_date.size());
    for (const auto& [d, acc] : by_date) {
        dates.emplace_back(d);
        values.push_back(acc.mean);
    }
    return ReturnSeries("equal_weight", period, std::move(dates), std::move(values));
}

}  // namespace rankskew
