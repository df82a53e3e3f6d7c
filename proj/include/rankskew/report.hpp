#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rankskew/analysis.hpp"
#include "rankskew/portfolio.hpp"
#include "rankskew/skew.hpp"
#include "rankskew/synth.hpp"

namespace rankskew {

struct NamedSkewReport {
    std::string name;
    SkewReport report;
};

/// Raw ranked P&L of a series and of its symmetrized twin, on the same rank grid.
struct CurvePair {
    std::string name;
    RankedPnlCurve curve;
    RankedPnlCurve symmetrized;
};

struct CrossSectionReport {
    CrossSection cross_section;
    RegressionResult fit;
    std::optional<RegressionResult> reference;  ///< classification against a fixed line
};

/// Everything a report can contain. Empty sections are left out of the
/// output entirely (never written as nulls).
struct ReportBundle {
    std::string command;
    std::vector<std::string> inputs;  ///< provenance of the input files
    std::optional<std::uint64_t> seed;
    std::vector<std::pair<std::string, double>> tolerances;
    std::vector<NamedSkewReport> skew;
    std::vector<CurvePair> curves;
    std::optional<CrossSectionReport> cross_section;
    std::optional<PcaResult> pca;
    std::vector<synth::Fig10Row> fig10;
    std::vector<DecileRow> deciles;
};

/// Pretty-printed JSON with keys in a fixed order, so identical inputs give
/// identical bytes.
std::string report_json(const ReportBundle& bundle);

/// `p,F,F_sym`.
void write_curve_csv(std::ostream& out, const RankedPnlCurve& curve,
                     const RankedPnlCurve& symmetrized);

/// `name,neg_zeta_star,sharpe,err_x,err_y,class`.
void write_scatter_csv(std::ostream& out, const CrossSection& cs, const RegressionResult& fit);

/// Fitted line and channel edges at the extreme -zeta* of the scatter:
/// `neg_zeta_star,line,upper,lower`.
void write_channel_csv(std::ostream& out, const CrossSection& cs, const RegressionResult& fit);

/// Writes report.json plus the plot-data CSVs of the populated sections into
/// `out_dir` and returns the files written. Throws EmptyInput for a bundle
/// without results and IOWrite when a file cannot be written.
std::vector<std::filesystem::path> render_report(const ReportBundle& bundle,
                                                 const std::filesystem::path& out_dir);

/// Writes `content` to `path`, throwing IOWrite on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace rankskew
