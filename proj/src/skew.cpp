#include "rankskew/skew.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <utility>

#include "rankskew/error.hpp"
#include "rankskew/random.hpp"

namespace rankskew {

std::string_view to_string(CurveVariant v) noexcept {
    switch (v) {
    case CurveVariant::raw: return "raw";
    case CurveVariant::standardized: return "standardized";
    case CurveVariant::symmetrized: return "symmetrized";
    }
    return "raw";
}

namespace {

// Running sum with Neumaier compensation.
class Accumulator {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            c_ += (sum_ - t) + v;
        } else {
            c_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + c_; }

private:
    double sum_ = 0.0;
    double c_ = 0.0;
};

std::vector<std::uint32_t> amplitude_order(std::span<const double> x) {
    std::vector<std::pair<double, std::uint32_t>> keyed(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        keyed[i] = {std::abs(x[i]), static_cast<std::uint32_t>(i)};
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::uint32_t> order(x.size());
    for (std::size_t k = 0; k < keyed.size(); ++k) order[k] = keyed[k].second;
    return order;
}

}  // namespace

RankedPnlCurve ranked_pnl(std::span<const double> r, CurveVariant variant,
                          std::optional<std::uint64_t> seed) {
    if (r.size() < 2) throw Error(ErrorCode::TooShort, "ranked P&L needs at least 2 returns");
    if (r.size() > UINT32_MAX) throw Error(ErrorCode::InvalidParams, "series too long");

    std::vector<double> x;
    double norm = 1.0;
    switch (variant) {
    case CurveVariant::raw:
        x.assign(r.begin(), r.end());
        break;
    case CurveVariant::standardized:
        x = standardize_values(r).z;
        norm = 1.0 / static_cast<double>(r.size());
        break;
    case CurveVariant::symmetrized:
        if (!seed) throw Error(ErrorCode::InvalidParams, "the symmetrized curve needs a seed");
        x = symmetrize_values(r, *seed);
        break;
    }

    const auto order = amplitude_order(x);
    const double n = static_cast<double>(x.size());
    RankedPnlCurve curve;
    curve.variant = variant;
    curve.p.resize(x.size());
    curve.F.resize(x.size());
    Accumulator cum;
    for (std::size_t k = 0; k < order.size(); ++k) {
        cum.add(x[order[k]]);
        curve.p[k] = static_cast<double>(k + 1) / n;
        curve.F[k] = cum.value() * norm;
    }
    if (variant == CurveVariant::standardized) {
        Accumulator area;
        for (double f : curve.F) area.add(f);
        curve.zeta_star = -100.0 * area.value() / n;
    }
    return curve;
}

RankedPnlCurve ranked_pnl(const ReturnSeries& s, CurveVariant variant,
                          std::optional<std::uint64_t> seed) {
    return ranked_pnl(s.values(), variant, seed);
}

double zeta_star(std::span<const double> r) {
    return *ranked_pnl(r, CurveVariant::standardized).zeta_star;
}

double zeta_star(const ReturnSeries& s) { return zeta_star(s.values()); }

ClassicalMoments classical_moments(std::span<const double> r) {
    if (r.size() < 3) throw Error(ErrorCode::TooShort, "moments need at least 3 returns");
    const double m = mean_of(r);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : r) {
        const double d = v - m;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    const double n = static_cast<double>(r.size());
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (!(m2 > 0.0)) throw Error(ErrorCode::ZeroVariance, "all returns are equal");

    std::vector<double> tmp(r.begin(), r.end());
    const auto mid = tmp.begin() + static_cast<std::ptrdiff_t>(tmp.size() / 2);
    std::nth_element(tmp.begin(), mid, tmp.end());
    double median = *mid;
    if (tmp.size() % 2 == 0) median = 0.5 * (median + *std::max_element(tmp.begin(), mid));

    ClassicalMoments out;
    out.zeta3 = m3 / std::pow(m2, 1.5);
    out.kurtosis = m4 / (m2 * m2) - 3.0;
    out.mean_minus_median = (m - median) / std::sqrt(m2);
    return out;
}

ClassicalMoments classical_moments(const ReturnSeries& s) { return classical_moments(s.values()); }

double edgeworth_zeta_star(double zeta3, double kurtosis) noexcept {
    return kEdgeworthConstant * zeta3 * (1.0 - kEdgeworthKurtosisCoefficient * kurtosis);
}

double co_skewness(const ReturnSeries& s, const ReturnSeries& benchmark) {
    std::vector<double> a, b;
    const auto da = s.dates();
    const auto db = benchmark.dates();
    for (std::size_t i = 0, j = 0; i < da.size() && j < db.size();) {
        if (da[i] < db[j]) {
            ++i;
        } else if (db[j] < da[i]) {
            ++j;
        } else {
            a.push_back(s.value(i++));
            b.push_back(benchmark.value(j++));
        }
    }
    if (a.size() < 12) {
        throw Error(ErrorCode::InsufficientOverlap,
                    "co-skewness needs 12 common dates, found " + std::to_string(a.size()));
    }
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    const double va = population_variance(a, ma);
    const double vb = population_variance(b, mb);
    if (!(va > 0.0) || !(vb > 0.0)) throw Error(ErrorCode::ZeroVariance, "constant series in co-skewness");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - ma) * (b[i] - mb) * (b[i] - mb);
    return acc / static_cast<double>(a.size()) / (std::sqrt(va) * vb);
}

std::size_t crossing_count(std::span<const double> r, std::uint64_t seed) {
    if (r.size() < 100) throw Error(ErrorCode::TooShort, "crossing count needs at least 100 returns");
    auto z = standardize_values(r).z;
    auto zs = symmetrize_values(z, seed);
    std::sort(z.begin(), z.end());
    std::sort(zs.begin(), zs.end());

    const double n = static_cast<double>(z.size());
    const double band = 2.0 / std::sqrt(n);
    std::size_t i = 0, j = 0;
    int last_sign = 0;
    std::size_t crossings = 0;
    while (i < z.size() || j < zs.size()) {
        double y;
        if (j == zs.size() || (i < z.size() && z[i] <= zs[j])) {
            y = z[i];
        } else {
            y = zs[j];
        }
        while (i < z.size() && z[i] <= y) ++i;
        while (j < zs.size() && zs[j] <= y) ++j;
        const double g = (static_cast<double>(i) - static_cast<double>(j)) / n;
        if (std::abs(g) < band) continue;
        const int sign = g > 0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign) ++crossings;
        last_sign = sign;
    }
    return crossings;
}

std::size_t crossing_count(const ReturnSeries& s, std::uint64_t seed) {
    return crossing_count(s.values(), seed);
}

double small_p_exponent(const RankedPnlCurve& curve, double p_min, double p_max) {
    if (curve.variant != CurveVariant::standardized) {
        throw Error(ErrorCode::InvalidParams, "small-p exponent is defined on the standardized curve");
    }
    if (!(p_min > 0.0) || !(p_max > p_min)) throw Error(ErrorCode::InvalidParams, "bad p window");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    int sign = 0;
    for (std::size_t k = 0; k < curve.p.size(); ++k) {
        const double p = curve.p[k];
        if (p < p_min || p > p_max) continue;
        const double f = curve.F[k];
        const int s = f > 0.0 ? 1 : (f < 0.0 ? -1 : 0);
        if (s == 0 || (sign != 0 && s != sign)) {
            throw Error(ErrorCode::SignChangeInWindow,
                        "F0 is not single-signed on [" + std::to_string(p_min) + ", " +
                            std::to_string(p_max) + "] (p = " + std::to_string(p) + ")");
        }
        sign = s;
        const double x = std::log(p);
        const double y = std::log(std::abs(f));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 20) {
        throw Error(ErrorCode::TooFewPoints,
                    "need 20 curve points in the window, found " + std::to_string(n));
    }
    const double dn = static_cast<double>(n);
    return (sxy - sx * sy / dn) / (sxx - sx * sx / dn);
}

WeightedZetaStar::WeightedZetaStar(std::span<const double> r) : original_(r.begin(), r.end()) {
    if (r.size() < 2) throw Error(ErrorCode::TooShort, "need at least 2 returns");
    if (r.size() > UINT32_MAX) throw Error(ErrorCode::InvalidParams, "series too long");
    std::vector<std::pair<double, std::uint32_t>> keyed(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) keyed[i] = {r[i], static_cast<std::uint32_t>(i)};
    std::sort(keyed.begin(), keyed.end());
    sorted_.resize(r.size());
    index_.resize(r.size());
    for (std::size_t k = 0; k < keyed.size(); ++k) {
        sorted_[k] = keyed[k].first;
        index_[k] = keyed[k].second;
    }
}

WeightedZetaStar::Result WeightedZetaStar::evaluate(std::span<const std::uint32_t> counts) const {
    if (counts.size() != original_.size()) {
        throw Error(ErrorCode::InvalidParams, "multiplicity vector has the wrong length");
    }
    Accumulator total, weight;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        total.add(static_cast<double>(counts[i]) * original_[i]);
        weight.add(static_cast<double>(counts[i]));
    }
    const double n = weight.value();
    if (!(n >= 2.0)) throw Error(ErrorCode::TooShort, "multiset has fewer than 2 points");
    const double m = total.value() / n;
    double var = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        const double d = original_[i] - m;
        var += static_cast<double>(counts[i]) * d * d;
    }
    var /= n;
    if (!(var > 0.0)) throw Error(ErrorCode::ZeroVariance, "multiset has zero variance");
    const double s = std::sqrt(var);

    // Outward merge from the mean reproduces the ascending-|z| order.
    const std::ptrdiff_t size = static_cast<std::ptrdiff_t>(sorted_.size());
    std::ptrdiff_t right = std::lower_bound(sorted_.begin(), sorted_.end(), m) - sorted_.begin();
    std::ptrdiff_t left = right - 1;
    double running = 0.0;  // un-normalized partial sum of z
    double area = 0.0;     // sum over ranks of partial sums
    while (left >= 0 || right < size) {
        std::ptrdiff_t pick;
        if (left < 0) {
            pick = right++;
        } else if (right >= size) {
            pick = left--;
        } else {
            const double dl = m - sorted_[static_cast<std::size_t>(left)];
            const double dr = sorted_[static_cast<std::size_t>(right)] - m;
            const bool take_left =
                dl < dr || (dl == dr && index_[static_cast<std::size_t>(left)] <
                                            index_[static_cast<std::size_t>(right)]);
            pick = take_left ? left-- : right++;
        }
        const auto k = static_cast<std::size_t>(pick);
        const std::uint32_t c = counts[index_[k]];
        if (c == 0) continue;
        const double z = (sorted_[k] - m) / s;
        const double dc = static_cast<double>(c);
        area += dc * running + z * dc * (dc + 1.0) * 0.5;
        running += dc * z;
    }
    return {-100.0 * area / (n * n), m, var};
}

BootstrapErrors bootstrap_errors(std::span<const double> r, Period period,
                                 const BootstrapOptions& options) {
    if (options.replicates < 2) throw Error(ErrorCode::InvalidParams, "bootstrap needs >= 2 replicates");
    const WeightedZetaStar kernel(r);
    const std::size_t n = r.size();
    const std::size_t b_count = options.replicates;
    const double ann = std::sqrt(periods_per_year(period));

    std::vector<double> zs(b_count), sr(b_count);
    unsigned threads = options.threads != 0 ? options.threads : std::thread::hardware_concurrency();
    threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::min<std::size_t>(b_count, 64)));

    auto worker = [&](unsigned t) {
        std::vector<std::uint32_t> counts(n);
        for (std::size_t b = t; b < b_count; b += threads) {
            auto rng = make_rng(options.seed, Stream::bootstrap, b);
            std::fill(counts.begin(), counts.end(), 0u);
            for (std::size_t i = 0; i < n; ++i) ++counts[uniform_index(rng, n)];
            const auto res = kernel.evaluate(counts);
            zs[b] = res.zeta_star;
            sr[b] = res.mean * ann / std::sqrt(res.variance);
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    }

    auto sample_sd = [](const std::vector<double>& v) {
        const double m = mean_of(v);
        double acc = 0.0;
        for (double x : v) acc += (x - m) * (x - m);
        return std::sqrt(acc / static_cast<double>(v.size() - 1));
    };
    return {sample_sd(zs), sample_sd(sr)};
}

SkewReport skew_report(const ReturnSeries& s, const ReturnSeries* benchmark,
                       const BootstrapOptions& options) {
    if (s.size() < 30) {
        throw Error(ErrorCode::TooShort, "skew report needs at least 30 returns, got " +
                                             std::to_string(s.size()));
    }
    SkewReport rep;
    rep.n = s.size();
    rep.seed = options.seed;
    rep.bootstrap = options.replicates;
    rep.zeta_star = zeta_star(s);
    const auto mom = classical_moments(s);
    rep.zeta3 = mom.zeta3;
    rep.kurtosis = mom.kurtosis;
    rep.mean_minus_median = mom.mean_minus_median;
    const auto perf = perf_stats(s);
    rep.sharpe = perf.sharpe;
    rep.ann_vol = perf.ann_vol;
    if (benchmark) rep.coskew = co_skewness(s, *benchmark);
    const auto err = bootstrap_errors(s.values(), s.period(), options);
    rep.err_zeta_star = err.err_zeta_star;
    rep.err_sharpe = err.err_sharpe;
    return rep;
}

}  // namespace rankskew
