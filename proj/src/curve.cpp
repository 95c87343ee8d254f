#include "epicurve/chart.hpp"

#include "epicurve/error.hpp"

#include <algorithm>

namespace epicurve {

namespace {

// Conventions, not epidemiological constants.
constexpr int smoothing_window = 7;
constexpr std::size_t run_length = 7;
constexpr double downslope_fraction = 0.5;
constexpr std::size_t min_days = 14;

} // namespace

std::vector<double> centered_moving_average(std::span<const double> values, int window)
{
    if (window < 1)
        throw Error(ErrorKind::InvalidParams, "smoothing window must be >= 1");
    const auto n = static_cast<std::ptrdiff_t>(values.size());
    const std::ptrdiff_t half = window / 2;
    std::vector<double> out(values.size());
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, k - half);
        const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, k + half);
        double sum = 0.0;
        for (std::ptrdiff_t j = lo; j <= hi; ++j)
            sum += values[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(k)] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

CurveReport classify_propagated(std::span<const double> daily)
{
    if (daily.size() < min_days)
        throw Error(ErrorKind::InsufficientData,
                    "curve classification needs at least " + std::to_string(min_days) + " days");
    const std::vector<double> smooth = centered_moving_average(daily, smoothing_window);
    const std::size_t n = smooth.size();

    CurveReport report;

    // Upslope: first run of 7 non-decreasing smoothed values that actually rises.
    for (std::size_t start = 0; start + run_length <= n; ++start) {
        const std::size_t end = start + run_length - 1;
        bool non_decreasing = true;
        for (std::size_t k = start + 1; k <= end && non_decreasing; ++k)
            non_decreasing = smooth[k] >= smooth[k - 1];
        if (non_decreasing && smooth[end] > smooth[start]) {
            report.upslope_start = static_cast<int>(start);
            break;
        }
    }

    const auto top = std::max_element(smooth.begin(), smooth.end());
    const auto peak = static_cast<std::size_t>(top - smooth.begin());
    if (*top > 0 && peak + run_length < n) {
        const bool falls = std::all_of(smooth.begin() + static_cast<std::ptrdiff_t>(peak) + 1,
                                       smooth.begin() + static_cast<std::ptrdiff_t>(peak + run_length) + 1,
                                       [&](double v) { return v < *top; });
        if (falls) {
            report.peak_day = static_cast<int>(peak);
            report.downslope_detected =
                std::any_of(smooth.begin() + static_cast<std::ptrdiff_t>(peak) + 1, smooth.end(),
                            [&](double v) { return v < downslope_fraction * *top; });
        }
    }
    return report;
}

CurveReport classify_propagated(const RegionSeries& series)
{
    const std::vector<double> daily = column_values(series, Column::DailyConfirmed);
    return classify_propagated(daily);
}

} // namespace epicurve
