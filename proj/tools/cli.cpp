#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>

#include "rankskew/analysis.hpp"
#include "rankskew/csv_io.hpp"
#include "rankskew/portfolio.hpp"
#include "rankskew/report.hpp"
#include "rankskew/skew.hpp"
#include "rankskew/synth.hpp"

namespace rankskew::cli {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kKinds{"price", "return"};
const std::vector<std::string> kPeriods{"daily", "monthly"};
const std::vector<std::string> kRebalances{"daily", "monthly"};
const std::vector<std::string> kDists{"ast", "edgeworth", "gaussian"};

void add_out_dir(CLI::App* cmd, CliState& s) {
    cmd->add_option("--out-dir", s.out_dir, "Directory collecting every output file")
        ->capture_default_str();
}

void add_seed(CLI::App* cmd, CliState& s) {
    cmd->add_option("--seed", s.seed, "Random seed (required; no clock-based default)")->required();
}

void add_threads(CLI::App* cmd, CliState& s) {
    cmd->add_option("--threads", s.threads,
                    "Worker threads for bootstrap replicates (0 = all cores); results do not "
                    "depend on it")
        ->capture_default_str();
}

void add_series_input(CLI::App* cmd, CliState& s) {
    cmd->add_option("--kind", s.kind, "How to read the value column: price or return")
        ->check(CLI::IsMember(kKinds))
        ->capture_default_str();
    cmd->add_option("--period", s.period, "Sampling period of the input: daily or monthly")
        ->check(CLI::IsMember(kPeriods))
        ->capture_default_str();
    cmd->add_option("--rate", s.rate_file,
                    "Annualized funding-rate CSV (date,value) subtracted to form excess returns")
        ->check(CLI::ExistingFile);
    cmd->add_flag("--risk-manage", s.risk_managed,
                  "Scale by the lagged 20-day EMA volatility estimate (daily input only)");
    cmd->add_flag("--monthly", s.monthly, "Aggregate daily returns to monthly sums before analysis");
}

Period parse_period(const std::string& p) { return p == "monthly" ? Period::monthly : Period::daily; }

ValueKind parse_kind(const std::string& k) { return k == "price" ? ValueKind::price : ValueKind::return_; }

// Reads and prepares one series according to the shared series flags.
ReturnSeries load_series(const CliState& s, const std::string& path, const std::string& label = {}) {
    ReturnSeries r = read_series_csv(path, parse_kind(s.kind), parse_period(s.period), label);
    if (!s.rate_file.empty()) r = excess_returns(r, read_rate_csv(s.rate_file));
    if (s.risk_managed) r = risk_manage(r);
    if (s.monthly) r = aggregate_monthly(r);
    return r;
}

/// Collects outputs in a staging directory and moves them into place only
/// when the whole command succeeded.
class Staging {
public:
    explicit Staging(const fs::path& out_dir) : out_dir_(out_dir), dir_(out_dir / ".rankskew_partial") {
        std::error_code ec;
        fs::create_directories(out_dir_, ec);
        if (ec) throw Error(ErrorCode::IOWrite, "cannot create " + out_dir_.string() + ": " + ec.message());
        fs::remove_all(dir_, ec);
        fs::create_directories(dir_, ec);
        if (ec) throw Error(ErrorCode::IOWrite, "cannot create " + dir_.string() + ": " + ec.message());
    }
    ~Staging() {
        std::error_code ec;
        fs::remove_all(dir_, ec);
    }
    Staging(const Staging&) = delete;
    Staging& operator=(const Staging&) = delete;

    const fs::path& dir() const { return dir_; }

    void write(const std::string& name, const std::string& content) {
        write_text_file(dir_ / name, content);
    }

    std::vector<fs::path> commit() {
        std::vector<fs::path> done;
        std::vector<fs::path> staged;
        for (const auto& e : fs::directory_iterator(dir_)) staged.push_back(e.path());
        std::sort(staged.begin(), staged.end());
        for (const auto& p : staged) {
            const fs::path target = out_dir_ / p.filename();
            std::error_code ec;
            fs::rename(p, target, ec);
            if (ec) {
                for (const auto& d : done) fs::remove(d, ec);
                throw Error(ErrorCode::IOWrite, "cannot move output to " + target.string());
            }
            done.push_back(target);
        }
        return done;
    }

private:
    fs::path out_dir_;
    fs::path dir_;
};

std::vector<fs::path> finish(Staging& staging, const ReportBundle& bundle) {
    render_report(bundle, staging.dir());
    return staging.commit();
}

std::vector<fs::path> run_analyze(const CliState& s) {
    Staging staging(s.out_dir);
    const ReturnSeries r = load_series(s, s.input, s.label);
    std::optional<ReturnSeries> bench;
    if (!s.benchmark.empty()) bench = load_series(s, s.benchmark);
    const BootstrapOptions opts{s.bootstrap, s.seed, s.threads};

    ReportBundle b;
    b.command = "analyze";
    b.inputs.push_back(s.input);
    if (!s.rate_file.empty()) b.inputs.push_back(s.rate_file);
    if (!s.benchmark.empty()) b.inputs.push_back(s.benchmark);
    b.seed = s.seed;
    b.skew.push_back({r.label(), skew_report(r, bench ? &*bench : nullptr, opts)});
    b.curves.push_back({r.label(), ranked_pnl(r, CurveVariant::raw),
                        ranked_pnl(r, CurveVariant::symmetrized, s.seed)});
    return finish(staging, b);
}

std::vector<fs::path> run_rankplot(const CliState& s) {
    Staging staging(s.out_dir);
    const ReturnSeries r = load_series(s, s.input, s.label);
    ReportBundle b;
    b.command = "rankplot";
    b.inputs.push_back(s.input);
    b.seed = s.seed;
    b.curves.push_back({r.label(), ranked_pnl(r, CurveVariant::raw),
                        ranked_pnl(r, CurveVariant::symmetrized, s.seed)});
    return finish(staging, b);
}

std::vector<fs::path> run_synth(const CliState& s) {
    Staging staging(s.out_dir);
    ReturnSeries r = [&] {
        if (s.dist == "ast") return synth::ast_sample(s.n, synth::AsymmetricStudentT(s.nu_plus, s.nu_minus), s.seed);
        if (s.dist == "edgeworth") return synth::edgeworth_sample(s.n, s.zeta3, s.kurt, s.seed);
        return synth::gaussian_sample(s.n, s.seed);
    }();
    std::ostringstream csv;
    write_series_csv(csv, r);
    staging.write("synth_" + s.dist + ".csv", csv.str());
    return staging.commit();
}

std::vector<fs::path> run_fig10(const CliState& s) {
    Staging staging(s.out_dir);
    ReportBundle b;
    b.command = "fig10";
    b.fig10 = synth::fig10_sweep(s.nu_minus, s.nu_plus_grid);
    return finish(staging, b);
}

std::vector<fs::path> bucket_outputs(Staging& staging, ReportBundle& b, const BucketResult& res) {
    b.deciles = decile_table(res.buckets);
    std::vector<Panel::Row> rows;
    for (const auto& bucket : res.buckets) {
        for (std::size_t i = 0; i < bucket.size(); ++i) {
            rows.push_back({bucket.date(i), bucket.label(), bucket.value(i)});
        }
    }
    std::ostringstream csv;
    write_panel_csv(csv, Panel::from_rows(std::move(rows)));
    staging.write("buckets.csv", csv.str());
    return finish(staging, b);
}

std::vector<fs::path> run_deciles(const CliState& s) {
    Staging staging(s.out_dir);
    const Panel returns = read_panel_csv(s.returns_file);
    const Panel signal = read_panel_csv(s.signal_file);
    const auto res = rank_buckets(returns, signal, s.buckets,
                                  s.rebalance == "daily" ? Rebalance::daily : Rebalance::monthly,
                                  parse_period(s.period));
    ReportBundle b;
    b.command = "deciles";
    b.inputs = {s.returns_file, s.signal_file};
    return bucket_outputs(staging, b, res);
}

std::vector<fs::path> run_carry(const CliState& s) {
    Staging staging(s.out_dir);
    const CarryPanels pairs = carry_pairs(read_panel_csv(s.spot_file), read_panel_csv(s.rates_file));
    const auto res = rank_buckets(pairs.returns, pairs.signal, s.buckets,
                                  s.rebalance == "daily" ? Rebalance::daily : Rebalance::monthly,
                                  Period::daily);
    std::ostringstream csv;
    write_panel_csv(csv, pairs.returns);
    staging.write("pair_returns.csv", csv.str());
    ReportBundle b;
    b.command = "carry";
    b.inputs = {s.spot_file, s.rates_file};
    return bucket_outputs(staging, b, res);
}

CrossSectionReport cross_section_report(CrossSection cs, bool reference) {
    CrossSectionReport rep{std::move(cs), {}, std::nullopt};
    rep.fit = cross_section_stats(rep.cross_section);
    if (reference) {
        rep.reference = classify_against_line(rep.cross_section, kReferenceIntercept, kReferenceSlope);
    }
    return rep;
}

std::vector<fs::path> run_regress(const CliState& s) {
    Staging staging(s.out_dir);
    ReportBundle b;
    b.command = "regress";
    b.inputs.push_back(s.input);
    b.tolerances.emplace_back("channel_tolerance", kChannelTolerance);
    b.cross_section = cross_section_report(read_cross_section_csv(s.input), s.reference);
    return finish(staging, b);
}

std::vector<fs::path> run_pca(const CliState& s) {
    Staging staging(s.out_dir);
    ReportBundle b;
    b.command = "pca";
    b.inputs.push_back(s.input);
    b.tolerances.emplace_back("min_window_coverage", kMinWindowCoverage);
    b.pca = pca_spectrum(read_panel_csv(s.input), s.window, s.step);
    return finish(staging, b);
}

std::vector<fs::path> run_report(const CliState& s) {
    Staging staging(s.out_dir);
    ReportBundle b;
    b.command = "report";
    b.seed = s.seed;
    b.tolerances.emplace_back("channel_tolerance", kChannelTolerance);
    const BootstrapOptions opts{s.bootstrap, s.seed, s.threads};
    std::vector<CrossSectionRow> rows;
    for (const auto& path : s.series_files) {
        const ReturnSeries r = load_series(s, path);
        b.inputs.push_back(path);
        const SkewReport rep = skew_report(r, nullptr, opts);
        b.skew.push_back({r.label(), rep});
        b.curves.push_back({r.label(), ranked_pnl(r, CurveVariant::raw),
                            ranked_pnl(r, CurveVariant::symmetrized, s.seed)});
        const bool excluded = std::find(s.exclude.begin(), s.exclude.end(), r.label()) != s.exclude.end();
        rows.push_back({r.label(), rep.sharpe, rep.ann_vol, rep.zeta_star, rep.err_sharpe,
                        rep.err_zeta_star, !excluded});
    }
    if (rows.size() >= 3) b.cross_section = cross_section_report(CrossSection(std::move(rows)), s.reference);
    return finish(staging, b);
}

}  // namespace

std::unique_ptr<CLI::App> build_app(CliState& s) {
    auto app = std::make_unique<CLI::App>(
        "Ranked-amplitude P&L, zeta* skewness and risk-premium analysis");
    app->require_subcommand(1);
    app->fallthrough(false);

    auto* analyze = app->add_subcommand("analyze", "Skewness report and ranked P&L curve of one return series");
    analyze->add_option("input", s.input, "Series CSV with columns date,value")->required()->check(CLI::ExistingFile);
    add_series_input(analyze, s);
    analyze->add_option("--label", s.label, "Series name in the outputs (default: file stem)");
    analyze->add_option("--benchmark", s.benchmark, "Benchmark series CSV for the co-skewness")
        ->check(CLI::ExistingFile);
    analyze->add_option("--bootstrap", s.bootstrap, "Bootstrap replicates for the standard errors")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    add_seed(analyze, s);
    add_threads(analyze, s);
    add_out_dir(analyze, s);

    auto* rankplot = app->add_subcommand("rankplot", "Ranked P&L curve and its symmetrized twin (p,F,F_sym)");
    rankplot->add_option("input", s.input, "Series CSV with columns date,value")->required()->check(CLI::ExistingFile);
    add_series_input(rankplot, s);
    rankplot->add_option("--label", s.label, "Series name in the outputs (default: file stem)");
    add_seed(rankplot, s);
    add_out_dir(rankplot, s);

    auto* synth = app->add_subcommand("synth", "Draw a synthetic return series");
    synth->add_option("dist", s.dist, "Distribution: ast, edgeworth or gaussian")
        ->required()
        ->check(CLI::IsMember(kDists));
    synth->add_option("--nu-plus", s.nu_plus, "Right tail exponent of the asymmetric Student-t")->capture_default_str();
    synth->add_option("--nu-minus", s.nu_minus, "Left tail exponent of the asymmetric Student-t")->capture_default_str();
    synth->add_option("--zeta3", s.zeta3, "Skewness of the Edgeworth density")->capture_default_str();
    synth->add_option("--kurt", s.kurt, "Excess kurtosis of the Edgeworth density")->capture_default_str();
    synth->add_option("--n", s.n, "Number of draws")->required()->check(CLI::PositiveNumber);
    add_seed(synth, s);
    add_out_dir(synth, s);

    auto* fig10 = app->add_subcommand("fig10", "Exact skewness and zeta* of the asymmetric Student-t across nu_plus");
    fig10->add_option("--nu-minus", s.nu_minus, "Fixed left tail exponent")->capture_default_str();
    fig10->add_option("--nu-plus-grid", s.nu_plus_grid, "Right tail exponents to tabulate")
        ->capture_default_str()
        ->delimiter(',');
    add_out_dir(fig10, s);

    auto* deciles = app->add_subcommand("deciles", "Signal-sorted bucket portfolios and their statistics");
    deciles->add_option("--returns", s.returns_file, "Asset returns panel CSV (date,asset,value)")
        ->required()
        ->check(CLI::ExistingFile);
    deciles->add_option("--signal", s.signal_file, "Signal panel CSV (date,asset,value), lagged one row")
        ->required()
        ->check(CLI::ExistingFile);
    deciles->add_option("--buckets", s.buckets, "Number of buckets")->capture_default_str()->check(CLI::PositiveNumber);
    deciles->add_option("--rebalance", s.rebalance, "Rebalance frequency: daily or monthly")
        ->capture_default_str()
        ->check(CLI::IsMember(kRebalances));
    deciles->add_option("--period", s.period, "Sampling period of the returns: daily or monthly")
        ->capture_default_str()
        ->check(CLI::IsMember(kPeriods));
    add_out_dir(deciles, s);

    auto* carry = app->add_subcommand("carry", "FX carry pairs ranked by rate differential");
    carry->add_option("--spot", s.spot_file, "Spot panel CSV: price of each currency in a common numeraire")
        ->required()
        ->check(CLI::ExistingFile);
    carry->add_option("--rates", s.rates_file, "Short-rate panel CSV, annualized fractions")
        ->required()
        ->check(CLI::ExistingFile);
    carry->add_option("--buckets", s.buckets, "Number of buckets")->capture_default_str()->check(CLI::PositiveNumber);
    carry->add_option("--rebalance", s.rebalance, "Rebalance frequency: daily or monthly")
        ->capture_default_str()
        ->check(CLI::IsMember(kRebalances));
    add_out_dir(carry, s);

    auto* regress = app->add_subcommand("regress", "Sharpe ratio against zeta* across strategies");
    regress->add_option("input", s.input,
                        "Cross-section CSV: name,sharpe,vol,zeta_star,err_sharpe,err_zeta_star,fit")
        ->required()
        ->check(CLI::ExistingFile);
    regress->add_flag("--reference", s.reference, "Also classify against the line S = 1/3 - zeta*/4");
    add_out_dir(regress, s);

    auto* pca = app->add_subcommand("pca", "Rolling eigenvalue spectrum of the strategy correlation matrix");
    pca->add_option("input", s.input, "Strategy returns panel CSV (date,asset,value)")
        ->required()
        ->check(CLI::ExistingFile);
    pca->add_option("--window", s.window, "Window length in dates")->capture_default_str()->check(CLI::PositiveNumber);
    pca->add_option("--step", s.step, "Step between windows in dates")->capture_default_str()->check(CLI::PositiveNumber);
    add_out_dir(pca, s);

    auto* report = app->add_subcommand("report", "Skewness reports, curves and cross-section for several series");
    report->add_option("--series", s.series_files, "Series CSV (repeat for each strategy)")
        ->required()
        ->check(CLI::ExistingFile);
    add_series_input(report, s);
    report->add_option("--exclude", s.exclude, "Series label kept out of the regression fit (repeatable)");
    report->add_flag("--reference", s.reference, "Also classify against the line S = 1/3 - zeta*/4");
    report->add_option("--bootstrap", s.bootstrap, "Bootstrap replicates for the standard errors")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    add_seed(report, s);
    add_threads(report, s);
    add_out_dir(report, s);

    return app;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CliState state;
    auto app = build_app(state);
    try {
        app->parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app->help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app->help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        if (!app->get_subcommands().empty()) {
            err << "run with " << app->get_subcommands().front()->get_name() << " --help for usage\n";
        } else {
            err << "run with --help for usage\n";
        }
        return 2;
    }

    const std::map<std::string, std::vector<fs::path> (*)(const CliState&)> commands{
        {"analyze", run_analyze}, {"rankplot", run_rankplot}, {"synth", run_synth},
        {"fig10", run_fig10},     {"deciles", run_deciles},   {"carry", run_carry},
        {"regress", run_regress}, {"pca", run_pca},           {"report", run_report},
    };
    const std::string name = app->get_subcommands().front()->get_name();
    try {
        for (const auto& p : commands.at(name)(state)) out << p.string() << "\n";
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace rankskew::cli
