#include "rankskew/panel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "rankskew/error.hpp"

namespace rankskew {

Panel::Panel(std::vector<std::string> assets, std::vector<Date> dates,
             std::vector<std::optional<double>> cells)
    : assets_(std::move(assets)), dates_(std::move(dates)), cells_(std::move(cells)) {
    if (assets_.empty() || dates_.empty()) throw Error(ErrorCode::EmptyInput, "empty panel");
    if (cells_.size() != assets_.size() * dates_.size()) {
        throw Error(ErrorCode::InvalidSeries, "panel cell count does not match dates x assets");
    }
    for (std::size_t i = 1; i < dates_.size(); ++i) {
        if (!(dates_[i - 1] < dates_[i])) {
            throw Error(ErrorCode::InvalidSeries, "panel dates not strictly increasing at " +
                                                      format_date(dates_[i]));
        }
    }
    std::set<std::string> seen;
    for (std::size_t a = 0; a < assets_.size(); ++a) {
        if (!seen.insert(assets_[a]).second) {
            throw Error(ErrorCode::InvalidSeries, "duplicate asset label '" + assets_[a] + "'");
        }
        bool populated = false;
        for (std::size_t d = 0; d < dates_.size() && !populated; ++d) populated = at(d, a).has_value();
        if (!populated) {
            throw Error(ErrorCode::InvalidSeries, "asset '" + assets_[a] + "' has no values");
        }
    }
    for (const auto& c : cells_) {
        if (c && !std::isfinite(*c)) throw Error(ErrorCode::InvalidSeries, "non-finite panel cell");
    }
}

Panel Panel::from_rows(std::vector<Row> rows) {
    if (rows.empty()) throw Error(ErrorCode::EmptyInput, "no panel rows");
    std::set<std::string> asset_set;
    std::set<std::chrono::sys_days> date_set;
    for (const auto& r : rows) {
        asset_set.insert(r.asset);
        date_set.insert(std::chrono::sys_days{r.date});
    }
    std::vector<std::string> assets(asset_set.begin(), asset_set.end());
    std::vector<Date> dates(date_set.begin(), date_set.end());
    std::map<std::string, std::size_t> asset_pos;
    for (std::size_t i = 0; i < assets.size(); ++i) asset_pos[assets[i]] = i;
    std::map<std::chrono::sys_days, std::size_t> date_pos;
    for (std::size_t i = 0; i < dates.size(); ++i) date_pos[std::chrono::sys_days{dates[i]}] = i;

    std::vector<std::optional<double>> cells(assets.size() * dates.size());
    for (const auto& r : rows) {
        auto& cell = cells[date_pos[std::chrono::sys_days{r.date}] * assets.size() + asset_pos[r.asset]];
        if (cell) {
            throw Error(ErrorCode::InvalidSeries,
                        "duplicate panel row (" + format_date(r.date) + ", " + r.asset + ")");
        }
        cell = r.value;
    }
    return Panel(std::move(assets), std::move(dates), std::move(cells));
}

std::optional<std::size_t> Panel::asset_index(const std::string& label) const {
    const auto it = std::find(assets_.begin(), assets_.end(), label);
    if (it == assets_.end()) return std::nullopt;
    return static_cast<std::size_t>(std::distance(assets_.begin(), it));
}

ReturnSeries Panel::column(std::size_t asset, Period period) const {
    std::vector<Date> d;
    std::vector<double> v;
    for (std::size_t i = 0; i < dates_.size(); ++i) {
        if (const auto& c = at(i, asset)) {
            d.push_back(dates_[i]);
            v.push_back(*c);
        }
    }
    return ReturnSeries(assets_.at(asset), period, std::move(d), std::move(v));
}

std::vector<Panel::Row> Panel::to_rows() const {
    std::vector<Row> rows;
    for (std::size_t d = 0; d < dates_.size(); ++d) {
        for (std::size_t a = 0; a < assets_.size(); ++a) {
            if (const auto& c = at(d, a)) rows.push_back({dates_[d], assets_[a], *c});
        }
    }
    return rows;
}

}  // namespace rankskew
