#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rankskew/panel.hpp"

namespace rankskew {

struct CrossSectionRow {
    std::string name;
    double sharpe = 0.0;
    double ann_vol = 0.0;
    double zeta_star = 0.0;
    double err_sharpe = 0.0;
    double err_zeta_star = 0.0;
    bool included_in_fit = true;
};

/// Per-strategy Sharpe ratio, volatility and skewness with their errors.
/// Names are unique and errors non-negative (checked on construction).
class CrossSection {
public:
    explicit CrossSection(std::vector<CrossSectionRow> rows);

    const std::vector<CrossSectionRow>& rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return rows_.size(); }

private:
    std::vector<CrossSectionRow> rows_;
};

/// `name,sharpe,vol,zeta_star,err_sharpe,err_zeta_star,fit` with fit in
/// {1, 0, true, false, yes, no}.
CrossSection read_cross_section_csv(const std::filesystem::path& path);

enum class Classification { on_line, below_line, pure_alpha };

std::string_view to_string(Classification c) noexcept;

/// Line S = a + b (-zeta*) with its 2-sigma channel.
struct RegressionResult {
    double intercept = 0.0;
    double slope = 0.0;
    /// Pearson correlations over all rows; absent when either variable is
    /// constant across the rows.
    std::optional<double> corr_skew_sr;  ///< zeta* against S
    std::optional<double> corr_vol_sr;   ///< volatility against S
    double channel_halfwidth = 0.0;
    std::vector<double> residuals;
    std::vector<Classification> classifications;
};

/// Residuals within this absolute distance of the channel edge count as
/// inside it, so rows lying exactly on the line stay on-line when every
/// error is zero.
inline constexpr double kChannelTolerance = 1e-9;

/// Unweighted OLS of S on -zeta* over the rows included in the fit, Pearson
/// correlations over all rows, channel = 2 x median of
/// sqrt(err_sharpe^2 + b^2 err_zeta_star^2). Throws TooFewRows with fewer
/// than three fit rows and DegenerateX when their zeta* are all equal.
RegressionResult cross_section_stats(const CrossSection& cs);

/// Classification of every row against a given line (for example the
/// reference S = 1/3 - zeta*/4); the channel is computed as in
/// cross_section_stats with the given slope.
RegressionResult classify_against_line(const CrossSection& cs, double intercept, double slope);

inline constexpr double kReferenceIntercept = 1.0 / 3.0;
inline constexpr double kReferenceSlope = 1.0 / 4.0;

double pearson(std::span<const double> x, std::span<const double> y);

struct PcaWindow {
    Date start;
    Date end;
    std::vector<double> eigenvalues;  ///< descending
    std::optional<double> separation; ///< lambda_1 / lambda_2, absent when lambda_2 is zero
    std::vector<double> top_vector;
};

struct PcaResult {
    std::vector<std::string> strategies;
    std::size_t window = 0;
    std::size_t step = 0;
    std::vector<PcaWindow> windows;
    std::size_t skipped_windows = 0;  ///< windows with a strategy below 80% coverage
    /// Mean |cosine| between top eigenvectors of consecutive windows.
    std::optional<double> stability;
};

inline constexpr double kMinWindowCoverage = 0.8;

/// Rolling correlation spectrum of a strategy panel. Correlations are
/// pairwise-complete; windows where any strategy is populated on fewer than
/// 80% of the dates are skipped. Throws SingularWindow when a strategy (or a
/// pair's common sub-sample) is constant inside a retained window.
PcaResult pca_spectrum(const Panel& panel, std::size_t window = 252, std::size_t step = 21);

void write_pca_csv(std::ostream& out, const PcaResult& result);

}  // namespace rankskew
