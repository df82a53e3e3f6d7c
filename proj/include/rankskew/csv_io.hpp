#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "rankskew/panel.hpp"
#include "rankskew/series.hpp"

namespace rankskew {

enum class ValueKind { price, return_, rate };

/// Two-column `date,value` file. Prices become arithmetic returns
/// p_t / p_{t-1} - 1, dated at t. Errors name the file and line.
ReturnSeries read_series_csv(const std::filesystem::path& path, ValueKind kind, Period period,
                             std::string label = {});
RateSeries read_rate_csv(const std::filesystem::path& path, std::string label = {});

/// Long-format `date,asset,value` file.
Panel read_panel_csv(const std::filesystem::path& path);

/// Round-trip formatting (17 significant digits).
std::string format_double(double v);

void write_series_csv(std::ostream& out, const ReturnSeries& s);
void write_panel_csv(std::ostream& out, const Panel& p);

}  // namespace rankskew
