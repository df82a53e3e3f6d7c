#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rankskew/panel.hpp"
#include "rankskew/series.hpp"

namespace rankskew {

enum class Rebalance { daily, monthly };

std::string_view to_string(Rebalance r) noexcept;

/// Bucket membership decided at one rebalance date, bucket 1 first.
struct BucketMembership {
    Date date;
    std::vector<std::vector<std::string>> members;
};

struct BucketResult {
    std::vector<ReturnSeries> buckets;  ///< labelled bucket_1 .. bucket_B
    std::vector<BucketMembership> rebalances;
};

/// Signal-sorted equal-weight portfolios. At each rebalance date (first
/// return date of each month, or every date) assets are ranked ascending by
/// the last signal row dated strictly before it; assets missing from that row
/// are not ranked. Ties are broken by asset label. Bucket k holds ranks
/// (ceil((k-1)N/B), ceil(kN/B)] and earns the mean return of its members
/// until the next rebalance. Throws TooFewAssets when N < B.
BucketResult rank_buckets(const Panel& returns, const Panel& signal, std::size_t n_buckets = 10,
                          Rebalance rebalance = Rebalance::monthly,
                          Period period = Period::daily);

/// r_long - r_short on the common dates (at least 21), before risk management.
ReturnSeries long_short_raw(const ReturnSeries& long_leg, const ReturnSeries& short_leg);

/// long_short_raw followed by risk_manage.
ReturnSeries long_short(const ReturnSeries& long_leg, const ReturnSeries& short_leg);

struct CarryPanels {
    Panel returns;  ///< one column per currency pair, long the higher-rate currency
    Panel signal;   ///< positive rate differential; missing when the rates are equal
};

/// Currency pairs for a carry universe. `spot` holds each currency's price in
/// a common numeraire, `rates` its annualized short rate. For every unordered
/// pair the position on day t is long the currency with the higher rate at
/// t-1 and earns d log(S_high / S_low) + (i_high - i_low) / 252. Pairs whose
/// rates never differ are dropped. Throws MissingRate for a currency without
/// a rate history.
CarryPanels carry_pairs(const Panel& spot, const Panel& rates);

struct DecileRow {
    std::size_t bucket = 0;
    double vol_pct = 0.0;  ///< per-period volatility in percent
    double zeta_star = 0.0;
    double sharpe = 0.0;  ///< annualized
};

std::vector<DecileRow> decile_table(std::span<const ReturnSeries> buckets);

void write_decile_csv(std::ostream& out, std::span<const DecileRow> rows);

}  // namespace rankskew
