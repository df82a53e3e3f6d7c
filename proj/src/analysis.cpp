#include "rankskew/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <set>
#include <span>

#include "rankskew/csv_io.hpp"
#include "rankskew/error.hpp"

namespace rankskew {

CrossSection::CrossSection(std::vector<CrossSectionRow> rows) : rows_(std::move(rows)) {
    std::set<std::string> names;
    for (const auto& r : rows_) {
        if (!names.insert(r.name).second) {
            throw Error(ErrorCode::InvalidParams, "duplicate cross-section row '" + r.name + "'");
        }
        if (!(r.err_sharpe >= 0.0) || !(r.err_zeta_star >= 0.0)) {
            throw Error(ErrorCode::InvalidParams, "negative error on row '" + r.name + "'");
        }
        if (!std::isfinite(r.sharpe) || !std::isfinite(r.ann_vol) || !std::isfinite(r.zeta_star) ||
            !std::isfinite(r.err_sharpe) || !std::isfinite(r.err_zeta_star)) {
            throw Error(ErrorCode::InvalidParams, "non-finite value on row '" + r.name + "'");
        }
    }
}

std::string_view to_string(Classification c) noexcept {
    switch (c) {
    case Classification::on_line: return "on-line";
    case Classification::below_line: return "below-line";
    case Classification::pure_alpha: return "pure-alpha";
    }
    return "unknown";
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::TooFewRows, "correlation needs two equally long samples");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) {
        throw Error(ErrorCode::DegenerateX, "correlation of a constant sample");
    }
    return sxy / std::sqrt(sxx * syy);
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void fill_classification(const CrossSection& cs, RegressionResult& out) {
    std::vector<double> combined;
    combined.reserve(cs.size());
    for (const auto& r : cs.rows()) {
        combined.push_back(std::sqrt(r.err_sharpe * r.err_sharpe +
                                     out.slope * out.slope * r.err_zeta_star * r.err_zeta_star));
    }
    out.channel_halfwidth = 2.0 * median(std::move(combined));
    out.residuals.clear();
    out.classifications.clear();
    for (const auto& r : cs.rows()) {
        const double res = r.sharpe - (out.intercept + out.slope * (-r.zeta_star));
        out.residuals.push_back(res);
        if (res > out.channel_halfwidth + kChannelTolerance) {
            out.classifications.push_back(Classification::pure_alpha);
        } else if (res < -out.channel_halfwidth - kChannelTolerance) {
            out.classifications.push_back(Classification::below_line);
        } else {
            out.classifications.push_back(Classification::on_line);
        }
    }
}

std::optional<double> correlation_if_defined(std::span<const double> x, std::span<const double> y) {
    if (x.size() < 2) return std::nullopt;
    const auto constant = [](std::span<const double> a) {
        return std::all_of(a.begin(), a.end(), [&](double e) { return e == a.front(); });
    };
    if (constant(x) || constant(y)) return std::nullopt;
    return pearson(x, y);
}

void fill_correlations(const CrossSection& cs, RegressionResult& out) {
    std::vector<double> s;
    std::vector<double> z;
    std::vector<double> v;
    for (const auto& r : cs.rows()) {
        s.push_back(r.sharpe);
        z.push_back(r.zeta_star);
        v.push_back(r.ann_vol);
    }
    out.corr_skew_sr = correlation_if_defined(z, s);
    out.corr_vol_sr = correlation_if_defined(v, s);
}

}  // namespace

RegressionResult cross_section_stats(const CrossSection& cs) {
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& r : cs.rows()) {
        if (!r.included_in_fit) continue;
        x.push_back(-r.zeta_star);
        y.push_back(r.sharpe);
    }
    if (x.size() < 3) {
        throw Error(ErrorCode::TooFewRows,
                    std::to_string(x.size()) + " rows included in the fit, at least 3 required");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw Error(ErrorCode::DegenerateX, "all fitted rows share the same zeta*");

    RegressionResult out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    fill_correlations(cs, out);
    fill_classification(cs, out);
    return out;
}

RegressionResult classify_against_line(const CrossSection& cs, double intercept, double slope) {
    if (cs.size() == 0) throw Error(ErrorCode::TooFewRows, "empty cross-section");
    RegressionResult out;
    out.intercept = intercept;
    out.slope = slope;
    fill_correlations(cs, out);
    fill_classification(cs, out);
    return out;
}

PcaResult pca_spectrum(const Panel& panel, std::size_t window, std::size_t step) {
    const std::size_t k = panel.n_assets();
    if (k < 2) throw Error(ErrorCode::TooFewAssets, "PCA needs at least two strategies");
    if (window < 2 || step == 0) throw Error(ErrorCode::InvalidParams, "window >= 2 and step >= 1 required");
    if (window > panel.n_dates()) {
        throw Error(ErrorCode::InvalidParams, "window of " + std::to_string(window) +
                                                  " dates exceeds the history of " +
                                                  std::to_string(panel.n_dates()));
    }

    PcaResult out;
    out.strategies = panel.assets();
    out.window = window;
    out.step = step;
    const auto min_count = static_cast<std::size_t>(std::ceil(kMinWindowCoverage * static_cast<double>(window)));

    for (std::size_t s = 0; s + window <= panel.n_dates(); s += step) {
        bool covered = true;
        for (std::size_t a = 0; a < k && covered; ++a) {
            std::size_t count = 0;
            for (std::size_t t = s; t < s + window; ++t) count += panel.at(t, a).has_value();
            covered = count >= min_count;
        }
        if (!covered) {
            ++out.skipped_windows;
            continue;
        }

        Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(k),
                                                         static_cast<Eigen::Index>(k));
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                std::vector<double> x;
                std::vector<double> y;
                for (std::size_t t = s; t < s + window; ++t) {
                    const auto& xi = panel.at(t, i);
                    const auto& yj = panel.at(t, j);
                    if (xi && yj) {
                        x.push_back(*xi);
                        y.push_back(*yj);
                    }
                }
                double c = 0.0;
                try {
                    c = pearson(x, y);
                } catch (const Error&) {
                    throw Error(ErrorCode::SingularWindow,
                                "constant returns for '" + panel.assets()[i] + "' or '" +
                                    panel.assets()[j] + "' in the window starting " +
                                    format_date(panel.dates()[s]));
                }
                corr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c;
                corr(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = c;
            }
        }

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(corr);
        if (solver.info() != Eigen::Success) {
            throw Error(ErrorCode::SingularWindow, "eigen-decomposition failed in the window starting " +
                                                       format_date(panel.dates()[s]));
        }
        PcaWindow w;
        w.start = panel.dates()[s];
        w.end = panel.dates()[s + window - 1];
        const auto& ev = solver.eigenvalues();
        for (Eigen::Index i = ev.size() - 1; i >= 0; --i) w.eigenvalues.push_back(ev(i));
        const double scale = std::max(1.0, std::abs(w.eigenvalues[0]));
        if (std::abs(w.eigenvalues[1]) > 1e-12 * scale) {
            w.separation = w.eigenvalues[0] / w.eigenvalues[1];
        }
        const auto top = solver.eigenvectors().col(ev.size() - 1);
        w.top_vector.assign(top.data(), top.data() + top.size());
        out.windows.push_back(std::move(w));
    }

    if (out.windows.empty()) {
        throw Error(ErrorCode::InsufficientOverlap, "no window reaches 80% coverage for every strategy");
    }
    if (out.windows.size() >= 2) {
        double total = 0.0;
        for (std::size_t i = 1; i < out.windows.size(); ++i) {
            double dot = 0.0;
            for (std::size_t a = 0; a < k; ++a) {
                dot += out.windows[i - 1].top_vector[a] * out.windows[i].top_vector[a];
            }
            total += std::abs(dot);
        }
        out.stability = total / static_cast<double>(out.windows.size() - 1);
    }
    return out;
}

void write_pca_csv(std::ostream& out, const PcaResult& result) {
    out << "start,end,separation";
    for (std::size_t i = 0; i < result.strategies.size(); ++i) out << ",lambda_" << (i + 1);
    out << '\n';
    for (const auto& w : result.windows) {
        out << format_date(w.start) << ',' << format_date(w.end) << ','
            << (w.separation ? format_double(*w.separation) : "");
        for (double v : w.eigenvalues) out << ',' << format_double(v);
        out << '\n';
    }
}

}  // namespace rankskew
