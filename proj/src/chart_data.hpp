#pragma once

// Internal: series extraction shared by the renderer and the linter.

#include "epicurve/chart.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace epicurve::detail {

struct PlottedSeries {
    SeriesRef ref;
    std::string label;
    /// Day numbers: days since the earliest plotted date, or days since P0.
    std::vector<double> x;
    std::vector<double> y;
    std::optional<Date> p0;
};

struct PlotData {
    std::vector<PlottedSeries> series;
    /// Date of x = 0 in calendar mode.
    std::optional<Date> origin;
};

/// Strict mode throws for missing or empty series and for series without a
/// P0 in days-since-P0 mode; lenient mode skips them.
PlotData prepare_plot_data(const ChartSpec& spec, std::span<const RegionSeries> data, bool strict);

bool has_log_panel(const ChartSpec& spec);
bool has_linear_only_view(const ChartSpec& spec);

LintFinding log_omission_note(const PlottedSeries& series, std::size_t omitted);

} // namespace epicurve::detail
