#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rankskew/series.hpp"

namespace rankskew {

enum class CurveVariant {
    raw,           ///< F(p): un-normalized cumulative P&L, F(1) = chronological total
    standardized,  ///< F0(p): zero-mean unit-variance returns, cumulated and divided by N
    symmetrized,   ///< F_s(p): raw curve of the randomly sign-symmetrized series
};

std::string_view to_string(CurveVariant v) noexcept;

/// Cumulative sum of returns taken in order of increasing amplitude, sampled
/// at p = k/N. Amplitude ties are broken by chronological index.
struct RankedPnlCurve {
    CurveVariant variant = CurveVariant::raw;
    std::vector<double> p;
    std::vector<double> F;
    std::optional<double> zeta_star;
};

RankedPnlCurve ranked_pnl(const ReturnSeries& s, CurveVariant variant,
                          std::optional<std::uint64_t> seed = std::nullopt);
RankedPnlCurve ranked_pnl(std::span<const double> r, CurveVariant variant,
                          std::optional<std::uint64_t> seed = std::nullopt);

/// zeta* = -100 * (1/N) * sum_k F0(k/N).
double zeta_star(const ReturnSeries& s);
double zeta_star(std::span<const double> r);

struct ClassicalMoments {
    double zeta3 = 0.0;              ///< m3 / m2^{3/2}
    double kurtosis = 0.0;           ///< m4 / m2^2 - 3
    double mean_minus_median = 0.0;  ///< (mean - median) / sigma
};

ClassicalMoments classical_moments(const ReturnSeries& s);
ClassicalMoments classical_moments(std::span<const double> r);

/// Weakly non-Gaussian limit of zeta*. The leading constant and the kurtosis
/// coefficient are those produced by integrating the Gram-Charlier density
/// exactly: zeta* = (100 / 6 pi) zeta3 (1 - kappa / 8).
inline constexpr double kEdgeworthConstant = 100.0 / (6.0 * std::numbers::pi);
inline constexpr double kEdgeworthKurtosisCoefficient = 1.0 / 8.0;

double edgeworth_zeta_star(double zeta3, double kurtosis) noexcept;

/// E[(r - mu)(b - mu_b)^2] / (sigma sigma_b^2) over the common dates.
double co_skewness(const ReturnSeries& s, const ReturnSeries& benchmark);

/// Sign changes of G(y) = ECDF(z) - ECDF(symmetrized z) over the pooled
/// support, after zeroing |G| < 2 / sqrt(N).
std::size_t crossing_count(const ReturnSeries& s, std::uint64_t seed);
std::size_t crossing_count(std::span<const double> r, std::uint64_t seed);

/// CDFs crossing exactly twice can be ordered by skewness preference.
inline bool skewness_comparable(std::size_t crossings) noexcept { return crossings == 2; }

/// OLS slope of log|F0| against log p on [p_min, p_max].
double small_p_exponent(const RankedPnlCurve& curve, double p_min = 0.01, double p_max = 0.2);

/// zeta* and the first two moments of a multiset drawn from a fixed sample.
/// The sample is sorted once; each evaluation with integer multiplicities is
/// a linear merge outward from the weighted mean, so bootstrap replicates
/// cost O(N) instead of a fresh sort.
class WeightedZetaStar {
public:
    explicit WeightedZetaStar(std::span<const double> r);

    struct Result {
        double zeta_star = 0.0;
        double mean = 0.0;
        double variance = 0.0;  ///< population
    };

    /// `counts[i]` is the multiplicity of chronological point i.
    Result evaluate(std::span<const std::uint32_t> counts) const;

    std::size_t size() const noexcept { return sorted_.size(); }

private:
    std::vector<double> sorted_;
    std::vector<std::uint32_t> index_;  // chronological index of sorted_[k]
    std::vector<double> original_;
};

struct BootstrapOptions {
    std::size_t replicates = 1000;
    std::uint64_t seed = 0;
    unsigned threads = 0;  ///< 0: hardware concurrency
};

struct BootstrapErrors {
    double err_zeta_star = 0.0;
    double err_sharpe = 0.0;
};

/// i.i.d. resampling with replacement; replicate b draws from its own
/// sub-stream of `seed`, so the result does not depend on the thread count.
BootstrapErrors bootstrap_errors(std::span<const double> r, Period period,
                                 const BootstrapOptions& options);

struct SkewReport {
    double zeta_star = 0.0;
    double zeta3 = 0.0;
    double kurtosis = 0.0;
    double mean_minus_median = 0.0;
    std::optional<double> coskew;
    double err_zeta_star = 0.0;
    double err_sharpe = 0.0;
    double sharpe = 0.0;
    double ann_vol = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::size_t bootstrap = 0;
};

SkewReport skew_report(const ReturnSeries& s, const ReturnSeries* benchmark,
                       const BootstrapOptions& options);

}  // namespace rankskew
