#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rankskew/date.hpp"
#include "rankskew/series.hpp"

namespace rankskew {

/// Date x asset grid of optional values (returns, prices, rates or signals).
/// Dates strictly increasing, asset labels unique, every asset populated at
/// least once.
class Panel {
public:
    Panel(std::vector<std::string> assets, std::vector<Date> dates,
          std::vector<std::optional<double>> cells);

    /// Builds the grid from long-format rows; duplicate (date, asset) rows are rejected.
    struct Row {
        Date date;
        std::string asset;
        double value;
    };
    static Panel from_rows(std::vector<Row> rows);

    const std::vector<std::string>& assets() const noexcept { return assets_; }
    const std::vector<Date>& dates() const noexcept { return dates_; }
    std::size_t n_assets() const noexcept { return assets_.size(); }
    std::size_t n_dates() const noexcept { return dates_.size(); }

    const std::optional<double>& at(std::size_t date_index, std::size_t asset_index) const {
        return cells_.at(date_index * assets_.size() + asset_index);
    }
    std::optional<std::size_t> asset_index(const std::string& label) const;

    /// Populated cells of one asset as a series.
    ReturnSeries column(std::size_t asset_index, Period period) const;

    std::vector<Row> to_rows() const;

private:
    std::vector<std::string> assets_;
    std::vector<Date> dates_;
    std::vector<std::optional<double>> cells_;
};

}  // namespace rankskew
