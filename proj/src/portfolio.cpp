#include "rankskew/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "rankskew/csv_io.hpp"
#include "rankskew/error.hpp"
#include "rankskew/skew.hpp"

namespace rankskew {

std::string_view to_string(Rebalance r) noexcept {
    return r == Rebalance::daily ? "daily" : "monthly";
}

namespace {

// Index of the last date in `dates` strictly before `d`.
std::optional<std::size_t> last_before(const std::vector<Date>& dates, const Date& d) {
    const auto it = std::lower_bound(dates.begin(), dates.end(), d);
    if (it == dates.begin()) return std::nullopt;
    return static_cast<std::size_t>(std::distance(dates.begin(), it)) - 1;
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

}  // namespace

BucketResult rank_buckets(const Panel& returns, const Panel& signal, std::size_t n_buckets,
                          Rebalance rebalance, Period period) {
    if (n_buckets == 0) throw Error(ErrorCode::InvalidParams, "bucket count must be positive");
    const auto& dates = returns.dates();

    // Signal column for each return asset (assets absent from the signal panel are never ranked).
    std::vector<std::optional<std::size_t>> signal_col(returns.n_assets());
    for (std::size_t a = 0; a < returns.n_assets(); ++a) {
        signal_col[a] = signal.asset_index(returns.assets()[a]);
    }

    std::vector<std::size_t> rebalance_at;
    for (std::size_t t = 0; t < dates.size(); ++t) {
        if (rebalance == Rebalance::daily || t == 0 || !same_month(dates[t - 1], dates[t])) {
            rebalance_at.push_back(t);
        }
    }

    std::vector<std::vector<Date>> out_dates(n_buckets);
    std::vector<std::vector<double>> out_values(n_buckets);
    BucketResult result;

    for (std::size_t r = 0; r < rebalance_at.size(); ++r) {
        const std::size_t t0 = rebalance_at[r];
        const std::size_t t1 = r + 1 < rebalance_at.size() ? rebalance_at[r + 1] : dates.size();
        const auto row = last_before(signal.dates(), dates[t0]);
        if (!row) continue;

        struct Ranked {
            double signal;
            const std::string* label;
            std::size_t asset;
        };
        std::vector<Ranked> ranked;
        for (std::size_t a = 0; a < returns.n_assets(); ++a) {
            if (!signal_col[a]) continue;
            if (const auto& v = signal.at(*row, *signal_col[a])) {
                ranked.push_back({*v, &returns.assets()[a], a});
            }
        }
        const std::size_t n = ranked.size();
        if (n < n_buckets) {
            throw Error(ErrorCode::TooFewAssets,
                        std::to_string(n) + " ranked assets for " + std::to_string(n_buckets) +
                            " buckets at " + format_date(dates[t0]));
        }
        std::sort(ranked.begin(), ranked.end(), [](const Ranked& x, const Ranked& y) {
            if (x.signal != y.signal) return x.signal < y.signal;
            return *x.label < *y.label;
        });

        BucketMembership membership{dates[t0], std::vector<std::vector<std::string>>(n_buckets)};
        std::vector<std::vector<std::size_t>> members(n_buckets);
        for (std::size_t k = 0; k < n_buckets; ++k) {
            const std::size_t lo = ceil_div(k * n, n_buckets);
            const std::size_t hi = ceil_div((k + 1) * n, n_buckets);
            for (std::size_t i = lo; i < hi; ++i) {
                members[k].push_back(ranked[i].asset);
                membership.members[k].push_back(*ranked[i].label);
            }
        }
        result.rebalances.push_back(std::move(membership));

        for (std::size_t t = t0; t < t1; ++t) {
            for (std::size_t k = 0; k < n_buckets; ++k) {
                double sum = 0.0;
                std::size_t count = 0;
                for (std::size_t a : members[k]) {
                    if (const auto& v = returns.at(t, a)) {
                        sum += *v;
                        ++count;
                    }
                }
                if (count > 0) {
                    out_dates[k].push_back(dates[t]);
                    out_values[k].push_back(sum / static_cast<double>(count));
                }
            }
        }
    }

    for (std::size_t k = 0; k < n_buckets; ++k) {
        if (out_values[k].empty()) {
            throw Error(ErrorCode::EmptyInput,
                        "bucket " + std::to_string(k + 1) + " has no returns (no signal precedes the return dates)");
        }
        result.buckets.emplace_back("bucket_" + std::to_string(k + 1), period,
                                    std::move(out_dates[k]), std::move(out_values[k]));
    }
    return result;
}

ReturnSeries long_short_raw(const ReturnSeries& long_leg, const ReturnSeries& short_leg) {
    if (long_leg.period() != short_leg.period()) {
        throw Error(ErrorCode::WrongPeriod, "long and short legs have different periods");
    }
    std::vector<Date> dates;
    std::vector<double> values;
    std::size_t i = 0;
    std::size_t j = 0;
    const auto ld = long_leg.dates();
    const auto sd = short_leg.dates();
    while (i < ld.size() && j < sd.size()) {
        if (ld[i] < sd[j]) {
            ++i;
        } else if (sd[j] < ld[i]) {
            ++j;
        } else {
            dates.push_back(ld[i]);
            values.push_back(long_leg.value(i) - short_leg.value(j));
            ++i;
            ++j;
        }
    }
    if (values.size() < 21) {
        throw Error(ErrorCode::InsufficientOverlap,
                    std::to_string(values.size()) + " common dates, at least 21 required");
    }
    return ReturnSeries(long_leg.label() + "-" + short_leg.label(), long_leg.period(),
                        std::move(dates), std::move(values));
}

ReturnSeries long_short(const ReturnSeries& long_leg, const ReturnSeries& short_leg) {
    return risk_manage(long_short_raw(long_leg, short_leg));
}

CarryPanels carry_pairs(const Panel& spot, const Panel& rates) {
    if (spot.n_assets() < 2) {
        throw Error(ErrorCode::TooFewAssets, "carry pairs need at least two currencies");
    }
    std::vector<std::size_t> rate_col(spot.n_assets());
    for (std::size_t a = 0; a < spot.n_assets(); ++a) {
        const auto idx = rates.asset_index(spot.assets()[a]);
        if (!idx) {
            throw Error(ErrorCode::MissingRate,
                        "no rate history for currency '" + spot.assets()[a] + "'");
        }
        rate_col[a] = *idx;
    }

    const auto& dates = spot.dates();
    const std::size_t n_dates = dates.size();
    // Last known rate of each currency at or before each spot date.
    std::vector<std::optional<double>> rate(n_dates * spot.n_assets());
    for (std::size_t a = 0; a < spot.n_assets(); ++a) {
        std::optional<double> last;
        std::size_t ri = 0;
        for (std::size_t t = 0; t < n_dates; ++t) {
            while (ri < rates.n_dates() && !(dates[t] < rates.dates()[ri])) {
                if (const auto& v = rates.at(ri, rate_col[a])) last = *v;
                ++ri;
            }
            rate[t * spot.n_assets() + a] = last;
        }
    }
    auto rate_at = [&](std::size_t t, std::size_t a) { return rate[t * spot.n_assets() + a]; };

    std::vector<std::string> labels;
    std::vector<std::vector<std::optional<double>>> ret_cols;
    std::vector<std::vector<std::optional<double>>> sig_cols;
    for (std::size_t a = 0; a < spot.n_assets(); ++a) {
        for (std::size_t b = a + 1; b < spot.n_assets(); ++b) {
            std::vector<std::optional<double>> ret(n_dates);
            std::vector<std::optional<double>> sig(n_dates);
            bool any_ret = false;
            bool any_sig = false;
            for (std::size_t t = 0; t < n_dates; ++t) {
                const auto ia = rate_at(t, a);
                const auto ib = rate_at(t, b);
                if (ia && ib && *ia != *ib) {
                    sig[t] = std::abs(*ia - *ib);
                    any_sig = true;
                }
                if (t == 0) continue;
                const auto pa = rate_at(t - 1, a);
                const auto pb = rate_at(t - 1, b);
                const auto& sa0 = spot.at(t - 1, a);
                const auto& sa1 = spot.at(t, a);
                const auto& sb0 = spot.at(t - 1, b);
                const auto& sb1 = spot.at(t, b);
                if (!pa || !pb || *pa == *pb || !sa0 || !sa1 || !sb0 || !sb1) continue;
                const double d_log = std::log(*sa1 / *sa0) - std::log(*sb1 / *sb0);
                const double sign = *pa > *pb ? 1.0 : -1.0;
                ret[t] = sign * d_log + std::abs(*pa - *pb) / 252.0;
                any_ret = true;
            }
            if (!any_ret || !any_sig) continue;
            labels.push_back(spot.assets()[a] + "/" + spot.assets()[b]);
            ret_cols.push_back(std::move(ret));
            sig_cols.push_back(std::move(sig));
        }
    }
    if (labels.empty()) {
        throw Error(ErrorCode::EmptyInput, "no currency pair has a non-zero rate differential");
    }

    auto assemble = [&](const std::vector<std::vector<std::optional<double>>>& cols) {
        std::vector<std::size_t> keep;
        for (std::size_t t = 0; t < n_dates; ++t) {
            for (const auto& c : cols) {
                if (c[t]) {
                    keep.push_back(t);
                    break;
                }
            }
        }
        std::vector<Date> d;
        std::vector<std::optional<double>> cells;
        cells.reserve(keep.size() * cols.size());
        for (std::size_t t : keep) {
            d.push_back(dates[t]);
            for (const auto& c : cols) cells.push_back(c[t]);
        }
        return Panel(labels, std::move(d), std::move(cells));
    };
    return {assemble(ret_cols), assemble(sig_cols)};
}

std::vector<DecileRow> decile_table(std::span<const ReturnSeries> buckets) {
    if (buckets.empty()) throw Error(ErrorCode::EmptyInput, "no buckets");
    std::vector<DecileRow> rows;
    rows.reserve(buckets.size());
    for (std::size_t k = 0; k < buckets.size(); ++k) {
        const PerfStats ps = perf_stats(buckets[k]);
        DecileRow row;
        row.bucket = k + 1;
        row.vol_pct = 100.0 * ps.ann_vol / std::sqrt(periods_per_year(buckets[k].period()));
        row.zeta_star = zeta_star(buckets[k]);
        row.sharpe = ps.sharpe;
        rows.push_back(row);
    }
    return rows;
}

void write_decile_csv(std::ostream& out, std::span<const DecileRow> rows) {
    out << "bucket,vol_pct,zeta_star,sharpe\n";
    for (const DecileRow& r : rows) {
        out << r.bucket << ',' << format_double(r.vol_pct) << ',' << format_double(r.zeta_star)
            << ',' << format_double(r.sharpe) << '\n';
    }
}

}  // namespace rankskew
