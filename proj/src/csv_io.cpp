#include "rankskew/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string_view>
#include <vector>

#include "rankskew/analysis.hpp"
#include "rankskew/error.hpp"

namespace rankskew {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

class CsvReader {
public:
    explicit CsvReader(const std::filesystem::path& path) : path_(path), in_(path) {
        if (!in_) throw Error(ErrorCode::Parse, path_.string() + ": cannot open file");
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw Error(ErrorCode::Parse, path_.string() + ":" + std::to_string(line_no_) + ": " + msg);
    }

    /// Header columns mapped to the requested names; fails if one is missing.
    std::vector<std::size_t> header(std::initializer_list<std::string_view> names) {
        if (!next()) fail("missing header row");
        const auto cols = split(line_);
        std::vector<std::size_t> idx;
        for (auto name : names) {
            std::size_t found = cols.size();
            for (std::size_t i = 0; i < cols.size(); ++i) {
                if (cols[i] == name) found = i;
            }
            if (found == cols.size()) fail("header lacks column '" + std::string(name) + "'");
            idx.push_back(found);
        }
        width_ = cols.size();
        return idx;
    }

    bool next() {
        while (std::getline(in_, line_)) {
            ++line_no_;
            if (!trim(line_).empty()) return true;
        }
        return false;
    }

    std::vector<std::string_view> fields() const {
        auto f = split(line_);
        if (f.size() != width_) {
            fail("expected " + std::to_string(width_) + " fields, found " + std::to_string(f.size()));
        }
        return f;
    }

    Date date(std::string_view text) const {
        const auto d = parse_date(text);
        if (!d) fail("malformed date '" + std::string(text) + "' (expected YYYY-MM-DD)");
        return *d;
    }

    double number(std::string_view text) const {
        double v = 0.0;
        const auto* end = text.data() + text.size();
        const auto [ptr, ec] = std::from_chars(text.data(), end, v);
        if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
            fail("malformed number '" + std::string(text) + "'");
        }
        return v;
    }

    std::size_t line_no() const { return line_no_; }

private:
    std::filesystem::path path_;
    std::ifstream in_;
    std::string line_;
    std::size_t line_no_ = 0;
    std::size_t width_ = 0;
};

struct DatedValues {
    std::vector<Date> dates;
    std::vector<double> values;
};

DatedValues read_two_column(CsvReader& reader) {
    const auto idx = reader.header({"date", "value"});
    DatedValues out;
    while (reader.next()) {
        const auto f = reader.fields();
        const Date d = reader.date(f[idx[0]]);
        if (!out.dates.empty() && !(out.dates.back() < d)) {
            reader.fail("date " + format_date(d) + " does not strictly follow the previous row");
        }
        out.dates.push_back(d);
        out.values.push_back(reader.number(f[idx[1]]));
    }
    return out;
}

}  // namespace

ReturnSeries read_series_csv(const std::filesystem::path& path, ValueKind kind, Period period,
                             std::string label) {
    if (label.empty()) label = path.stem().string();
    CsvReader reader(path);
    auto data = read_two_column(reader);
    if (data.values.empty()) reader.fail("no data rows");
    if (kind == ValueKind::rate) {
        throw Error(ErrorCode::InvalidParams, path.string() + ": rate files are not return series");
    }
    if (kind == ValueKind::price) {
        if (data.values.size() < 2) reader.fail("a price file needs at least two rows");
        std::vector<double> r;
        r.reserve(data.values.size() - 1);
        for (std::size_t i = 1; i < data.values.size(); ++i) {
            if (!(data.values[i - 1] > 0.0)) {
                throw Error(ErrorCode::Parse, path.string() + ": non-positive price on " +
                                                  format_date(data.dates[i - 1]));
            }
            r.push_back(data.values[i] / data.values[i - 1] - 1.0);
        }
        data.dates.erase(data.dates.begin());
        data.values = std::move(r);
    }
    return ReturnSeries(std::move(label), period, std::move(data.dates), std::move(data.values));
}

RateSeries read_rate_csv(const std::filesystem::path& path, std::string label) {
    if (label.empty()) label = path.stem().string();
    CsvReader reader(path);
    auto data = read_two_column(reader);
    if (data.values.empty()) reader.fail("no data rows");
    return RateSeries(std::move(label), std::move(data.dates), std::move(data.values));
}

Panel read_panel_csv(const std::filesystem::path& path) {
    CsvReader reader(path);
    const auto idx = reader.header({"date", "asset", "value"});
    std::vector<Panel::Row> rows;
    while (reader.next()) {
        const auto f = reader.fields();
        if (f[idx[1]].empty()) reader.fail("empty asset label");
        rows.push_back({reader.date(f[idx[0]]), std::string(f[idx[1]]), reader.number(f[idx[2]])});
    }
    if (rows.empty()) reader.fail("no data rows");
    try {
        return Panel::from_rows(std::move(rows));
    } catch (const Error& e) {
        throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
    }
}

CrossSection read_cross_section_csv(const std::filesystem::path& path) {
    CsvReader reader(path);
    const auto idx =
        reader.header({"name", "sharpe", "vol", "zeta_star", "err_sharpe", "err_zeta_star", "fit"});
    std::vector<CrossSectionRow> rows;
    while (reader.next()) {
        const auto f = reader.fields();
        CrossSectionRow r;
        r.name = std::string(f[idx[0]]);
        if (r.name.empty()) reader.fail("empty strategy name");
        r.sharpe = reader.number(f[idx[1]]);
        r.ann_vol = reader.number(f[idx[2]]);
        r.zeta_star = reader.number(f[idx[3]]);
        r.err_sharpe = reader.number(f[idx[4]]);
        r.err_zeta_star = reader.number(f[idx[5]]);
        const auto fit = f[idx[6]];
        if (fit == "1" || fit == "true" || fit == "yes") {
            r.included_in_fit = true;
        } else if (fit == "0" || fit == "false" || fit == "no") {
            r.included_in_fit = false;
        } else {
            reader.fail("fit flag must be one of 1, 0, true, false, yes, no");
        }
        if (r.err_sharpe < 0.0 || r.err_zeta_star < 0.0) reader.fail("negative error");
        rows.push_back(std::move(r));
    }
    if (rows.empty()) reader.fail("no data rows");
    try {
        return CrossSection(std::move(rows));
    } catch (const Error& e) {
        throw Error(ErrorCode::Parse, path.string() + ": " + e.what());
    }
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_series_csv(std::ostream& out, const ReturnSeries& s) {
    out << "date,value\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << format_date(s.date(i)) << ',' << format_double(s.value(i)) << '\n';
    }
}

void write_panel_csv(std::ostream& out, const Panel& p) {
    out << "date,asset,value\n";
    for (const auto& r : p.to_rows()) {
        out << format_date(r.date) << ',' << r.asset << ',' << format_double(r.value) << '\n';
    }
}

}  // namespace rankskew
