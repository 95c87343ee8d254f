#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace epicurve {

using Date = std::chrono::sys_days;

/// Strict ISO-8601 calendar date, "YYYY-MM-DD".
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date date);

/// Dated daily and cumulative case counts for one region. Cumulative columns
/// are always the running sums of the matching daily columns.
struct RegionSeries {
    std::string region;
    std::vector<Date> dates;
    std::vector<std::int64_t> daily_confirmed;
    std::vector<std::int64_t> daily_recovered;
    std::vector<std::int64_t> daily_deceased;
    std::vector<std::int64_t> total_confirmed;
    std::vector<std::int64_t> total_recovered;
    std::vector<std::int64_t> total_deceased;

    std::size_t size() const { return dates.size(); }
    bool operator==(const RegionSeries&) const = default;
};

enum class Column {
    DailyConfirmed,
    TotalConfirmed,
    DailyRecovered,
    TotalRecovered,
    DailyDeceased,
    TotalDeceased,
};

/// In the column order of the national summary table.
inline constexpr Column all_columns[] = {Column::DailyConfirmed, Column::TotalConfirmed,
                                         Column::DailyRecovered, Column::TotalRecovered,
                                         Column::DailyDeceased,  Column::TotalDeceased};

std::string_view to_string(Column column);
std::optional<Column> parse_column(std::string_view name);
std::vector<double> column_values(const RegionSeries& series, Column column);

/// Builds a series of consecutive days starting at `start`; totals are derived.
/// Recovered/deceased may be empty, meaning all zero.
RegionSeries make_region_series(std::string region, Date start,
                                std::vector<std::int64_t> daily_confirmed,
                                std::vector<std::int64_t> daily_recovered = {},
                                std::vector<std::int64_t> daily_deceased = {});

/// Throws Error(Consistency) if any RegionSeries invariant is violated.
void validate(const RegionSeries& series);

inline constexpr std::string_view csv_header = "date,region,daily_confirmed,daily_recovered,daily_deceased";

/**
 * Parses a CSV (see `csv_header`) or JSON (`{region: [{date, dc, dr, dd}]}`)
 * document. The format is picked from the first non-blank character.
 *
 * Regions come back in order of first appearance. Rows of one region must be
 * on consecutive dates. A blank daily value is read as 0 until the first
 * non-blank value of that column for the region; later blanks are errors.
 * Documents may also carry `total_confirmed,total_recovered,total_deceased`
 * (CSV) or `tc`, `tr`, `td` (JSON); those are checked against the running sums.
 */
std::vector<RegionSeries> parse_timeseries(std::string_view document);

/// Canonical CSV form; parse_timeseries(serialize_timeseries(x)) == x.
std::string serialize_timeseries(std::span<const RegionSeries> collection);

std::vector<std::int64_t> derive_cumulative(std::span<const std::int64_t> daily);

struct AlignedSeries {
    /// Days from the original series start to P0, the first day with a confirmed case.
    int offset = 0;
    Date p0;
    /// Rows from P0 on; index k is day k since P0. Recovered/deceased counts
    /// recorded before P0 are folded into the first row so totals are preserved.
    RegionSeries series;
};

AlignedSeries align_p0(const RegionSeries& series);

struct SummaryStats {
    std::size_t count = 0;
    double mean = 0.0;
    double std_dev = 0.0;
    double min = 0.0;
    double p25 = 0.0;
    double p50 = 0.0;
    double p75 = 0.0;
    double max = 0.0;
};

/// Sample standard deviation (n - 1 denominator, 0 for a single value);
/// percentiles interpolate linearly between closest ranks.
SummaryStats summary_stats(std::span<const double> values);

/// Linear-interpolation percentile of already sorted data, `q` in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

/// Rows Count, Mean, Std, Min, P25, P50, P75, Max; one column per entry.
std::string stats_to_csv(std::span<const std::pair<std::string, SummaryStats>> columns);

} // namespace epicurve
