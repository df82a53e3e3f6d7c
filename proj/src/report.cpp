#include "rankskew/report.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "rankskew/csv_io.hpp"
#include "rankskew/error.hpp"

namespace rankskew {

namespace {

using json = nlohmann::ordered_json;

json skew_json(const SkewReport& r) {
    json j;
    j["zeta_star"] = r.zeta_star;
    j["zeta3"] = r.zeta3;
    j["kurtosis"] = r.kurtosis;
    j["mean_minus_median"] = r.mean_minus_median;
    if (r.coskew) j["coskew"] = *r.coskew;
    j["err_zeta_star"] = r.err_zeta_star;
    j["err_sharpe"] = r.err_sharpe;
    j["sharpe"] = r.sharpe;
    j["ann_vol"] = r.ann_vol;
    j["n"] = r.n;
    j["seed"] = r.seed;
    j["bootstrap"] = r.bootstrap;
    return j;
}

json regression_json(const CrossSection& cs, const RegressionResult& r) {
    json j;
    j["intercept"] = r.intercept;
    j["slope"] = r.slope;
    if (r.corr_skew_sr) j["corr_skew_sr"] = *r.corr_skew_sr;
    if (r.corr_vol_sr) j["corr_vol_sr"] = *r.corr_vol_sr;
    j["channel_halfwidth"] = r.channel_halfwidth;
    json rows = json::array();
    for (std::size_t i = 0; i < cs.size(); ++i) {
        json row;
        row["name"] = cs.rows()[i].name;
        row["residual"] = r.residuals[i];
        row["class"] = std::string(to_string(r.classifications[i]));
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j;
}

json pca_json(const PcaResult& p) {
    json j;
    j["strategies"] = p.strategies;
    j["window"] = p.window;
    j["step"] = p.step;
    j["skipped_windows"] = p.skipped_windows;
    if (p.stability) j["stability"] = *p.stability;
    json windows = json::array();
    for (const auto& w : p.windows) {
        json wj;
        wj["start"] = format_date(w.start);
        wj["end"] = format_date(w.end);
        wj["eigenvalues"] = w.eigenvalues;
        if (w.separation) wj["separation"] = *w.separation;
        windows.push_back(std::move(wj));
    }
    j["windows"] = std::move(windows);
    return j;
}

bool has_results(const ReportBundle& b) {
    return !b.skew.empty() || !b.curves.empty() || b.cross_section || b.pca || !b.fig10.empty() ||
           !b.deciles.empty();
}

std::string safe_name(const std::string& name) {
    std::string out = name;
    for (char& c : out) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                        c == '-' || c == '_' || c == '.';
        if (!ok) c = '_';
    }
    return out.empty() ? "series" : out;
}

}  // namespace

std::string report_json(const ReportBundle& b) {
    json j;
    j["command"] = b.command;
    if (!b.inputs.empty()) j["inputs"] = b.inputs;
    if (b.seed) j["seed"] = *b.seed;
    if (!b.tolerances.empty()) {
        json t;
        for (const auto& [k, v] : b.tolerances) t[k] = v;
        j["tolerances"] = std::move(t);
    }
    if (!b.skew.empty()) {
        json s = json::array();
        for (const auto& r : b.skew) {
            json e;
            e["name"] = r.name;
            e.update(skew_json(r.report));
            s.push_back(std::move(e));
        }
        j["skew"] = std::move(s);
    }
    if (!b.curves.empty()) {
        json c = json::array();
        for (const auto& cp : b.curves) {
            json e;
            e["name"] = cp.name;
            e["n"] = cp.curve.p.size();
            e["file"] = "curve_" + safe_name(cp.name) + ".csv";
            c.push_back(std::move(e));
        }
        j["curves"] = std::move(c);
    }
    if (b.cross_section) {
        json c;
        c["fit"] = regression_json(b.cross_section->cross_section, b.cross_section->fit);
        if (b.cross_section->reference) {
            c["reference"] = regression_json(b.cross_section->cross_section, *b.cross_section->reference);
        }
        j["cross_section"] = std::move(c);
    }
    if (b.pca) j["pca"] = pca_json(*b.pca);
    if (!b.fig10.empty()) {
        json f = json::array();
        for (const auto& r : b.fig10) {
            json e;
            e["nu_plus"] = r.nu_plus;
            if (r.zeta3) e["zeta3"] = *r.zeta3;
            e["zeta_star"] = r.zeta_star;
            e["standardized"] = r.standardized;
            f.push_back(std::move(e));
        }
        j["fig10"] = std::move(f);
    }
    if (!b.deciles.empty()) {
        json d = json::array();
        for (const auto& r : b.deciles) {
            json e;
            e["bucket"] = r.bucket;
            e["vol_pct"] = r.vol_pct;
            e["zeta_star"] = r.zeta_star;
            e["sharpe"] = r.sharpe;
            d.push_back(std::move(e));
        }
        j["deciles"] = std::move(d);
    }
    return j.dump(2) + "\n";
}

void write_curve_csv(std::ostream& out, const RankedPnlCurve& curve,
                     const RankedPnlCurve& symmetrized) {
    if (curve.p.size() != symmetrized.p.size()) {
        throw Error(ErrorCode::InvalidParams, "curve and symmetrized curve differ in length");
    }
    out << "p,F,F_sym\n";
    for (std::size_t i = 0; i < curve.p.size(); ++i) {
        out << format_double(curve.p[i]) << ',' << format_double(curve.F[i]) << ','
            << format_double(symmetrized.F[i]) << '\n';
    }
}

void write_scatter_csv(std::ostream& out, const CrossSection& cs, const RegressionResult& fit) {
    out << "name,neg_zeta_star,sharpe,err_x,err_y,class\n";
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const auto& r = cs.rows()[i];
        out << r.name << ',' << format_double(-r.zeta_star) << ',' << format_double(r.sharpe) << ','
            << format_double(r.err_zeta_star) << ',' << format_double(r.err_sharpe) << ','
            << to_string(fit.classifications[i]) << '\n';
    }
}

void write_channel_csv(std::ostream& out, const CrossSection& cs, const RegressionResult& fit) {
    out << "neg_zeta_star,line,upper,lower\n";
    if (cs.size() == 0) return;
    double lo = -cs.rows().front().zeta_star;
    double hi = lo;
    for (const auto& r : cs.rows()) {
        lo = std::min(lo, -r.zeta_star);
        hi = std::max(hi, -r.zeta_star);
    }
    for (double x : {lo, hi}) {
        const double y = fit.intercept + fit.slope * x;
        out << format_double(x) << ',' << format_double(y) << ','
            << format_double(y + fit.channel_halfwidth) << ','
            << format_double(y - fit.channel_halfwidth) << '\n';
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IOWrite, "cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::IOWrite, "failed writing " + path.string());
}

std::vector<std::filesystem::path> render_report(const ReportBundle& bundle,
                                                 const std::filesystem::path& out_dir) {
    if (!has_results(bundle)) throw Error(ErrorCode::EmptyInput, "report has no results");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::IOWrite, "cannot create " + out_dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string& name, const std::string& content) {
        const auto path = out_dir / name;
        written.push_back(path);
        write_text_file(path, content);
    };

    emit("report.json", report_json(bundle));
    for (const auto& cp : bundle.curves) {
        std::ostringstream s;
        write_curve_csv(s, cp.curve, cp.symmetrized);
        emit("curve_" + safe_name(cp.name) + ".csv", s.str());
    }
    if (bundle.cross_section) {
        std::ostringstream s;
        write_scatter_csv(s, bundle.cross_section->cross_section, bundle.cross_section->fit);
        emit("scatter.csv", s.str());
        std::ostringstream c;
        write_channel_csv(c, bundle.cross_section->cross_section, bundle.cross_section->fit);
        emit("channel.csv", c.str());
    }
    if (bundle.pca) {
        std::ostringstream s;
        write_pca_csv(s, *bundle.pca);
        emit("pca.csv", s.str());
    }
    if (!bundle.fig10.empty()) {
        std::ostringstream s;
        synth::write_fig10_csv(s, bundle.fig10);
        emit("fig10.csv", s.str());
    }
    if (!bundle.deciles.empty()) {
        std::ostringstream s;
        write_decile_csv(s, bundle.deciles);
        emit("deciles.csv", s.str());
    }
    return written;
}

}  // namespace rankskew
