#include "rankskew/synth.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "rankskew/csv_io.hpp"
#include "rankskew/error.hpp"
#include "rankskew/quadrature.hpp"
#include "rankskew/random.hpp"

namespace rankskew::synth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRelTol = 1e-10;

double phi(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

std::string fmt_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

ReturnSeries synthetic_series(std::string label, std::vector<double> values) {
    if (values.empty()) throw Error(ErrorCode::InvalidParams, "n must be at least 1");
    if (values.size() > kMaxSyntheticLength) {
        throw Error(ErrorCode::InvalidParams,
                    "n = " + std::to_string(values.size()) + " exceeds the dated-series limit of " +
                        std::to_string(kMaxSyntheticLength));
    }
    return ReturnSeries::from_values(std::move(label), Period::daily, std::move(values));
}

// Smallest positive root of f(y) - target on [lo, hi] for increasing f.
double solve_increasing(const std::function<double(double)>& f, double target, double lo,
                        double hi) {
    while (f(hi) < target) hi *= 2.0;
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t max_iter = 200;
    auto [a, b] = boost::math::tools::toms748_solve([&](double y) { return f(y) - target; }, lo,
                                                    hi, tol, max_iter);
    return 0.5 * (a + b);
}

}  // namespace

const std::size_t kMaxSyntheticLength = [] {
    using namespace std::chrono;
    const sys_days first{year{1900} / January / day{1}};
    const sys_days last{year{9999} / December / day{31}};
    return static_cast<std::size_t>((last - first).count() + 1);
}();

// ---------------------------------------------------------------------------
// GridSampler

GridSampler::GridSampler(const std::function<double(double)>& density_t, double t_lo, double t_hi,
                         std::function<double(double)> to_x, std::size_t nodes)
    : t_lo_(t_lo), to_x_(std::move(to_x)) {
    if (nodes < 2 || !(t_hi > t_lo)) throw Error(ErrorCode::InvalidParams, "degenerate sampling grid");
    dt_ = (t_hi - t_lo) / static_cast<double>(nodes - 1);
    auto guarded = [&density_t](double t) {
        const double v = density_t(t);
        return std::isfinite(v) && v > 0.0 ? v : 0.0;
    };
    cdf_.resize(nodes);
    cdf_[0] = 0.0;
    for (std::size_t i = 0; i + 1 < nodes; ++i) {
        const double a = t_lo + static_cast<double>(i) * dt_;
        cdf_[i + 1] = cdf_[i] + quadrature::gauss_legendre(guarded, a, a + dt_);
    }
    total_ = cdf_.back();
    if (!(total_ > 0.0)) throw Error(ErrorCode::InvalidParams, "density has no mass on the grid");
    for (double& c : cdf_) c /= total_;
    cdf_.back() = 1.0;
}

double GridSampler::quantile(double u) const {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t i = it == cdf_.begin() ? 0 : static_cast<std::size_t>(it - cdf_.begin()) - 1;
    i = std::min(i, cdf_.size() - 2);
    const double width = cdf_[i + 1] - cdf_[i];
    const double frac = width > 0.0 ? std::clamp((u - cdf_[i]) / width, 0.0, 1.0) : 0.5;
    return to_x_(t_lo_ + (static_cast<double>(i) + frac) * dt_);
}

std::vector<double> GridSampler::sample(std::size_t n, std::uint64_t seed) const {
    Rng rng = make_rng(seed, Stream::sampling);
    std::vector<double> out(n);
    for (double& x : out) x = quantile(uniform_open(rng));
    return out;
}

// ---------------------------------------------------------------------------
// Generic density oracles

double central_moment(const std::function<double(double)>& pdf, double center, int k, double lo,
                      double hi, double width) {
    auto f = [&](double x) {
        const double p = pdf(x);
        if (p == 0.0) return 0.0;
        return std::pow(x - center, k) * p;
    };
    return quadrature::integrate(f, lo, hi, kRelTol, width);
}

ExactMoments exact_moments(const std::function<double(double)>& pdf, double lo, double hi,
                           double width) {
    const double mass = central_moment(pdf, 0.0, 0, lo, hi, width);
    const double mean = central_moment(pdf, 0.0, 1, lo, hi, width) / mass;
    const double m2 = central_moment(pdf, mean, 2, lo, hi, width) / mass;
    const double m3 = central_moment(pdf, mean, 3, lo, hi, width) / mass;
    const double m4 = central_moment(pdf, mean, 4, lo, hi, width) / mass;
    return {mean, m2, m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0};
}

double exact_zeta_star(const std::function<double(double)>& pdf, double center, double scale,
                       double width) {
    const double w = width / scale;
    auto q = [&](double z) { return scale * pdf(center + scale * z); };
    auto q_sym = [&](double y) { return q(y) + q(-y); };
    auto tail = [&](double x) { return quadrature::integrate(q_sym, x, kInf, 1e-11, w); };
    auto outer = [&](double x) {
        const double qa = q(x) - q(-x);
        if (qa == 0.0) return 0.0;
        return x * qa * tail(x);
    };
    return -100.0 * quadrature::integrate(outer, 0.0, kInf, kRelTol, w);
}

std::vector<double> exact_ranked_pnl(const std::function<double(double)>& pdf, double center,
                                     double scale, std::span<const double> p, double width) {
    const double w = width / scale;
    auto q = [&](double z) { return scale * pdf(center + scale * z); };
    auto inner_mass = [&](double y) {
        return quadrature::integrate([&](double x) { return q(x) + q(-x); }, 0.0, y, 1e-12, w);
    };
    std::vector<double> out;
    out.reserve(p.size());
    for (double pk : p) {
        if (!(pk > 0.0 && pk < 1.0)) {
            throw Error(ErrorCode::InvalidParams, "rank fraction outside (0, 1)");
        }
        const double y = solve_increasing(inner_mass, pk, 0.0, w);
        out.push_back(quadrature::integrate([&](double x) { return x * (q(x) - q(-x)); }, 0.0, y,
                                            1e-12, w));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Asymmetric Student-t

AsymmetricStudentT::AsymmetricStudentT(double nu_plus, double nu_minus)
    : nu_plus_(nu_plus), nu_minus_(nu_minus) {
    if (!(nu_plus > 0.5) || !(nu_minus > 0.5) || !std::isfinite(nu_plus) ||
        !std::isfinite(nu_minus)) {
        throw Error(ErrorCode::InvalidParams,
                    "tail exponents must exceed 1/2 (nu_plus = " + fmt_param(nu_plus) +
                        ", nu_minus = " + fmt_param(nu_minus) + ")");
    }
    width_ = std::sqrt(0.5 * (nu_plus + nu_minus));

    auto kernel = [this](double x) { return std::exp(log_kernel(x)); };
    const double mass = quadrature::integrate(kernel, -kInf, kInf, kRelTol, width_);
    norm_ = 1.0 / mass;

    auto density = [this](double x) { return pdf(x); };
    if (nu_plus > 1.0 && nu_minus > 1.0) {
        mean_ = central_moment(density, 0.0, 1, -kInf, kInf, width_);
        if (nu_plus > 2.0 && nu_minus > 2.0) {
            variance_ = central_moment(density, *mean_, 2, -kInf, kInf, width_);
        }
    }

    const double c = width_;
    sampler_.emplace(
        [this, c](double theta) {
            const double cs = std::cos(theta);
            return pdf(c * std::tan(theta)) * c / (cs * cs);
        },
        -std::numbers::pi / 2.0, std::numbers::pi / 2.0,
        [c](double theta) { return c * std::tan(theta); });
}

// log of (1 + x/q)^{(nu_minus + 1)/2} (1 - x/q)^{(nu_plus + 1)/2}, q = sqrt(c^2 + x^2),
// with the cancelling factor rewritten as c^2 / (q +/- x).
double AsymmetricStudentT::log_kernel(double x) const {
    const double c2 = width_ * width_;
    const double q = std::hypot(width_, x);
    double q_plus;
    double q_minus;
    if (x >= 0.0) {
        q_plus = q + x;
        q_minus = c2 / q_plus;
    } else {
        q_minus = q - x;
        q_plus = c2 / q_minus;
    }
    const double lq = std::log(q);
    return 0.5 * (nu_minus_ + 1.0) * (std::log(q_plus) - lq) +
           0.5 * (nu_plus_ + 1.0) * (std::log(q_minus) - lq);
}

double AsymmetricStudentT::pdf(double x) const {
    if (std::isnan(x)) return 0.0;
    if (std::isinf(x)) return 0.0;
    return norm_ * std::exp(log_kernel(x));
}

double AsymmetricStudentT::cdf(double x) const {
    if (std::isnan(x)) throw Error(ErrorCode::InvalidParams, "cdf at NaN");
    auto density = [this](double y) { return pdf(y); };
    if (x <= 0.0) return quadrature::integrate(density, -kInf, x, kRelTol, width_);
    return 1.0 - quadrature::integrate(density, x, kInf, kRelTol, width_);
}

std::vector<double> AsymmetricStudentT::sample_values(std::size_t n, std::uint64_t seed) const {
    return sampler_->sample(n, seed);
}

double ast_density(double x, const AsymmetricStudentT& dist) { return dist.pdf(x); }

ReturnSeries ast_sample(std::size_t n, const AsymmetricStudentT& dist, std::uint64_t seed) {
    if (n == 0) throw Error(ErrorCode::InvalidParams, "n must be at least 1");
    if (n > kMaxSyntheticLength) return synthetic_series("", std::vector<double>(n));
    return synthetic_series("ast(" + fmt_param(dist.nu_plus()) + "," +
                                fmt_param(dist.nu_minus()) + ")",
                            dist.sample_values(n, seed));
}

double ast_zeta3_exact(const AsymmetricStudentT& dist) {
    if (!(dist.nu_plus() > 3.0) || !(dist.nu_minus() > 3.0)) {
        throw Error(ErrorCode::MomentDoesNotExist,
                    "skewness needs nu_plus > 3 and nu_minus > 3 (nu_plus = " +
                        fmt_param(dist.nu_plus()) + ", nu_minus = " + fmt_param(dist.nu_minus()) +
                        ")");
    }
    auto density = [&dist](double x) { return dist.pdf(x); };
    const double m = *dist.mean();
    const double m2 = *dist.variance();
    const double m3 = central_moment(density, m, 3, -kInf, kInf, dist.width());
    return m3 / std::pow(m2, 1.5);
}

ExactZetaStar ast_zeta_star_exact(const AsymmetricStudentT& dist) {
    auto density = [&dist](double x) { return dist.pdf(x); };
    if (dist.variance()) {
        const double sd = std::sqrt(*dist.variance());
        return {exact_zeta_star(density, *dist.mean(), sd, dist.width()), true};
    }
    return {exact_zeta_star(density, 0.0, 1.0, dist.width()), false};
}

// ---------------------------------------------------------------------------
// Edgeworth (Gram-Charlier) density

EdgeworthDensity::EdgeworthDensity(double zeta3, double kurt) : zeta3_(zeta3), kurt_(kurt) {
    if (!std::isfinite(zeta3) || !std::isfinite(kurt)) {
        throw Error(ErrorCode::InvalidParams, "non-finite Edgeworth parameters");
    }
    const auto steps = static_cast<std::size_t>(std::llround(2.0 * kRange / kScanStep));
    auto raw = [this](double x) { return phi(x) * bracket(x); };

    double worst_x = -kRange;
    double worst = 0.0;
    std::vector<double> roots;
    double prev_x = -kRange;
    double prev_b = bracket(prev_x);
    for (std::size_t i = 0; i <= steps; ++i) {
        const double x = -kRange + static_cast<double>(i) * kScanStep;
        const double b = bracket(x);
        if (const double v = phi(x) * b; v < worst) {
            worst = v;
            worst_x = x;
        }
        if (i > 0 && ((prev_b < 0.0) != (b < 0.0))) {
            auto [lo, hi] = boost::math::tools::bisect(
                [this](double y) { return bracket(y); }, prev_x, x,
                boost::math::tools::eps_tolerance<double>(52));
            roots.push_back(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_b = b;
    }

    std::vector<double> edges{-kRange};
    edges.insert(edges.end(), roots.begin(), roots.end());
    edges.push_back(kRange);
    double positive = 0.0;
    double negative = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i];
        const double b = edges[i + 1];
        const double m = quadrature::integrate(raw, a, b, 1e-12);
        if (bracket(0.5 * (a + b)) >= 0.0) {
            pieces_.emplace_back(a, b);
            positive += m;
        } else {
            negative -= m;
        }
    }
    if (worst < 0.0 && negative / positive > kMaxClippedMass) {
        throw Error(ErrorCode::NegativeDensity,
                    "density negative at x = " + fmt_param(worst_x) + " (zeta3 = " +
                        fmt_param(zeta3) + ", kurt = " + fmt_param(kurt) +
                        ", negative mass = " + fmt_param(negative) + ")");
    }
    if (std::abs(zeta3) > 0.3 || kurt < 0.0 || kurt > 3.0) {
        throw Error(ErrorCode::InvalidParams,
                    "Edgeworth parameters outside |zeta3| <= 0.3, 0 <= kurt <= 3 (zeta3 = " +
                        fmt_param(zeta3) + ", kurt = " + fmt_param(kurt) + ")");
    }
    clipped_ = negative / positive;
    norm_ = 1.0 / positive;

    sampler_.emplace([this](double x) { return pdf(x); }, -kRange, kRange,
                     [](double x) { return x; });
}

double EdgeworthDensity::bracket(double x) const {
    const double x2 = x * x;
    const double he3 = x * (x2 - 3.0);
    const double he4 = x2 * (x2 - 6.0) + 3.0;
    return 1.0 + zeta3_ / 6.0 * he3 + kurt_ / 24.0 * he4;
}

double EdgeworthDensity::clipped_raw(double x) const {
    if (!(x >= -kRange && x <= kRange)) return 0.0;
    return phi(x) * std::max(bracket(x), 0.0);
}

double EdgeworthDensity::pdf(double x) const { return norm_ * clipped_raw(x); }

double EdgeworthDensity::cdf(double x) const {
    if (std::isnan(x)) throw Error(ErrorCode::InvalidParams, "cdf at NaN");
    double total = 0.0;
    for (const auto& [a, b] : pieces_) {
        if (x <= a) break;
        total += quadrature::integrate([this](double y) { return pdf(y); }, a, std::min(b, x),
                                       1e-12);
    }
    return std::min(total, 1.0);
}

ExactMoments EdgeworthDensity::moments() const {
    auto piecewise = [this](double center, int k) {
        double total = 0.0;
        for (const auto& [a, b] : pieces_) {
            total += central_moment([this](double y) { return pdf(y); }, center, k, a, b);
        }
        return total;
    };
    const double mass = piecewise(0.0, 0);
    const double mean = piecewise(0.0, 1) / mass;
    const double m2 = piecewise(mean, 2) / mass;
    const double m3 = piecewise(mean, 3) / mass;
    const double m4 = piecewise(mean, 4) / mass;
    return {mean, m2, m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0};
}

ExactZetaStar EdgeworthDensity::zeta_star_exact() const {
    const ExactMoments m = moments();
    return {exact_zeta_star([this](double x) { return pdf(x); }, m.mean, std::sqrt(m.variance)),
            true};
}

std::vector<double> EdgeworthDensity::sample_values(std::size_t n, std::uint64_t seed) const {
    return sampler_->sample(n, seed);
}

std::vector<double> EdgeworthDensity::ranked_pnl_exact(std::span<const double> p) const {
    const ExactMoments m = moments();
    return exact_ranked_pnl([this](double x) { return pdf(x); }, m.mean, std::sqrt(m.variance), p);
}

double edgeworth_density(double x, const EdgeworthDensity& dist) { return dist.pdf(x); }

ReturnSeries edgeworth_sample(std::size_t n, double zeta3, double kurt, std::uint64_t seed) {
    const EdgeworthDensity dist(zeta3, kurt);
    if (n == 0 || n > kMaxSyntheticLength) return synthetic_series("", std::vector<double>(n));
    return synthetic_series("edgeworth(" + fmt_param(zeta3) + "," + fmt_param(kurt) + ")",
                            dist.sample_values(n, seed));
}

// ---------------------------------------------------------------------------
// Gaussian null

std::vector<double> gaussian_values(std::size_t n, std::uint64_t seed) {
    Rng rng = make_rng(seed, Stream::sampling);
    std::vector<double> out(n);
    for (double& x : out) x = -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * uniform_open(rng));
    return out;
}

ReturnSeries gaussian_sample(std::size_t n, std::uint64_t seed) {
    if (n == 0 || n > kMaxSyntheticLength) return synthetic_series("", std::vector<double>(n));
    return synthetic_series("gaussian", gaussian_values(n, seed));
}

// ---------------------------------------------------------------------------
// Tail-exponent sweep

std::vector<Fig10Row> fig10_sweep(double nu_minus, std::span<const double> nu_plus_grid) {
    std::vector<Fig10Row> rows;
    rows.reserve(nu_plus_grid.size());
    for (double nu_plus : nu_plus_grid) {
        const AsymmetricStudentT dist(nu_plus, nu_minus);
        Fig10Row row;
        row.nu_plus = nu_plus;
        if (nu_plus > 3.0 && nu_minus > 3.0) row.zeta3 = ast_zeta3_exact(dist);
        const ExactZetaStar zs = ast_zeta_star_exact(dist);
        row.zeta_star = zs.value;
        row.standardized = zs.standardized;
        rows.push_back(row);
    }
    return rows;
}

void write_fig10_csv(std::ostream& out, std::span<const Fig10Row> rows) {
    out << "nu_plus,zeta3,zeta_star,standardized\n";
    for (const Fig10Row& r : rows) {
        out << format_double(r.nu_plus) << ',' << (r.zeta3 ? format_double(*r.zeta3) : "") << ','
            << format_double(r.zeta_star) << ',' << (r.standardized ? "true" : "false") << '\n';
    }
}

}  // namespace rankskew::synth
