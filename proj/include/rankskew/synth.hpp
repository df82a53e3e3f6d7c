#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "rankskew/series.hpp"

namespace rankskew::synth {

/// Inverse-CDF sampler on a monotone grid. The cumulative mass of a density
/// is tabulated at equally spaced nodes of a coordinate t (possibly a
/// compactified one) and inverted by linear interpolation in t.
class GridSampler {
public:
    static constexpr std::size_t kDefaultNodes = 65537;

    /// `density_t` is the density in the t coordinate (Jacobian included);
    /// `to_x` maps t back to the sample space.
    GridSampler(const std::function<double(double)>& density_t, double t_lo, double t_hi,
                std::function<double(double)> to_x, std::size_t nodes = kDefaultNodes);

    double quantile(double u) const;
    std::vector<double> sample(std::size_t n, std::uint64_t seed) const;

    /// Mass under the density before normalization (quadrature self-check).
    double total_mass() const noexcept { return total_; }

private:
    double t_lo_;
    double dt_;
    std::vector<double> cdf_;
    std::function<double(double)> to_x_;
    double total_ = 0.0;
};

/// Mean, variance, skewness and excess kurtosis by quadrature.
struct ExactMoments {
    double mean = 0.0;
    double variance = 0.0;
    double zeta3 = 0.0;
    double kurtosis = 0.0;
};

struct ExactZetaStar {
    double value = 0.0;
    bool standardized = true;  ///< false: evaluated on the raw density (no finite variance)
};

/// Skewed Student-t of Jones & Faddy with right/left tail exponents
/// nu_plus / nu_minus: P(r) ~ |r|^{-1-nu_{+/-}} as r -> +/-inf.
/// Immutable once built; the sampling grid is precomputed.
class AsymmetricStudentT {
public:
    AsymmetricStudentT(double nu_plus, double nu_minus);

    double nu_plus() const noexcept { return nu_plus_; }
    double nu_minus() const noexcept { return nu_minus_; }
    double norm_const() const noexcept { return norm_; }
    /// sqrt((nu_plus + nu_minus) / 2), the natural width of the density.
    double width() const noexcept { return width_; }

    double pdf(double x) const;
    double cdf(double x) const;
    std::optional<double> mean() const noexcept { return mean_; }
    std::optional<double> variance() const noexcept { return variance_; }

    std::vector<double> sample_values(std::size_t n, std::uint64_t seed) const;

private:
    double log_kernel(double x) const;

    double nu_plus_;
    double nu_minus_;
    double width_;
    double norm_ = 1.0;
    std::optional<double> mean_;
    std::optional<double> variance_;
    std::optional<GridSampler> sampler_;
};

double ast_density(double x, const AsymmetricStudentT& dist);
ReturnSeries ast_sample(std::size_t n, const AsymmetricStudentT& dist, std::uint64_t seed);

/// Throws MomentDoesNotExist unless both exponents exceed 3.
double ast_zeta3_exact(const AsymmetricStudentT& dist);
/// Standardized when both exponents exceed 2, raw density otherwise.
ExactZetaStar ast_zeta_star_exact(const AsymmetricStudentT& dist);

/// Gram-Charlier density phi(x) [1 + zeta3/6 He3(x) + kurt/24 He4(x)] on
/// [-8, 8], renormalized. Parameters are accepted when the negative part of
/// the bracket carries at most kMaxClippedMass probability (that part is
/// clipped to zero); otherwise NegativeDensity names the most negative x.
class EdgeworthDensity {
public:
    static constexpr double kRange = 8.0;
    static constexpr double kScanStep = 1e-3;
    static constexpr double kMaxClippedMass = 1e-5;

    EdgeworthDensity(double zeta3, double kurt);

    double zeta3() const noexcept { return zeta3_; }
    double kurt() const noexcept { return kurt_; }
    double clipped_mass() const noexcept { return clipped_; }

    double pdf(double x) const;
    double cdf(double x) const;
    ExactMoments moments() const;
    ExactZetaStar zeta_star_exact() const;

    std::vector<double> sample_values(std::size_t n, std::uint64_t seed) const;

    /// F0(p) of the (standardized) density at the rank fractions `p`.
    std::vector<double> ranked_pnl_exact(std::span<const double> p) const;

private:
    double bracket(double x) const;
    double clipped_raw(double x) const;

    double zeta3_;
    double kurt_;
    double norm_ = 1.0;
    double clipped_ = 0.0;
    std::vector<std::pair<double, double>> pieces_;  // intervals where the bracket is positive
    std::optional<GridSampler> sampler_;
};

double edgeworth_density(double x, const EdgeworthDensity& dist);
ReturnSeries edgeworth_sample(std::size_t n, double zeta3, double kurt, std::uint64_t seed);

/// Standard normal draws by exact inverse CDF.
std::vector<double> gaussian_values(std::size_t n, std::uint64_t seed);
ReturnSeries gaussian_sample(std::size_t n, std::uint64_t seed);

/// Longest series the synthetic generators will date: consecutive days from
/// 1900-01-01 up to 9999-12-31, the last date with a four-digit year.
/// Longer draws are available as plain values.
extern const std::size_t kMaxSyntheticLength;

/// int (x - center)^k pdf(x) dx over [lo, hi] (bounds may be infinite);
/// `width` is the characteristic scale used by the compactifying map.
double central_moment(const std::function<double(double)>& pdf, double center, int k, double lo,
                      double hi, double width = 1.0);

/// Mean, variance, skewness and kurtosis of a density with finite fourth moment.
ExactMoments exact_moments(const std::function<double(double)>& pdf, double lo, double hi,
                           double width = 1.0);

/// zeta* = -100 int_0^inf dx x P_a(x) P(|r| > x) for the density centred at
/// `center` and scaled by `scale` (standardized when these are the mean and
/// standard deviation).
double exact_zeta_star(const std::function<double(double)>& pdf, double center, double scale,
                       double width = 1.0);

/// Continuum F0(p) = int_{|z| < y(p)} z Q(z) dz with P(|z| < y(p)) = p, for the
/// density Q(z) = scale * pdf(center + scale * z). Every p must lie in (0, 1).
std::vector<double> exact_ranked_pnl(const std::function<double(double)>& pdf, double center,
                                     double scale, std::span<const double> p, double width = 1.0);

struct Fig10Row {
    double nu_plus = 0.0;
    std::optional<double> zeta3;  ///< absent when nu_plus <= 3
    double zeta_star = 0.0;
    bool standardized = true;
};

std::vector<Fig10Row> fig10_sweep(double nu_minus, std::span<const double> nu_plus_grid);
void write_fig10_csv(std::ostream& out, std::span<const Fig10Row> rows);

}  // namespace rankskew::synth
