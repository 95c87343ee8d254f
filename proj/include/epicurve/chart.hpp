#pragma once

#include "epicurve/ingest.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace epicurve {

enum class XMode { CalendarDate, DaysSinceP0 };
enum class YScale { Linear, Log10 };
enum class PanelKind { Line, Boxplot };

std::string_view to_string(XMode mode);
std::string_view to_string(YScale scale);
std::string_view to_string(PanelKind kind);

struct SeriesRef {
    std::string region;
    Column column = Column::DailyConfirmed;

    /// "region:column", used as the lint subject and legend entry.
    std::string label() const;
    bool operator==(const SeriesRef&) const = default;
};

struct ChartSpec {
    std::string title;
    XMode x_mode = XMode::CalendarDate;
    YScale y_scale = YScale::Linear;
    PanelKind panel_kind = PanelKind::Line;
    /// Linear panel on the left and log10 panel on the right over a shared
    /// x-axis. `y_scale` is ignored when set.
    bool dual_panel = false;
    int width = 800;
    int height = 400;
    std::vector<SeriesRef> series;
    /// Optional tests-per-day series for the testing-confound rule.
    std::vector<double> testing_volume;

    bool operator==(const ChartSpec&) const = default;
};

/// Throws Error(InvalidParams) when the spec breaks its invariants.
void validate(const ChartSpec& spec);

/// Reads a ChartSpec JSON document; throws Error(Parse) on malformed input.
ChartSpec parse_chart_spec(std::string_view json);
std::string chart_spec_to_json(const ChartSpec& spec);

/**
 * Maps `value` from the data domain [lo, hi] onto the pixel range [a, b].
 * Log10 maps log10(value) affinely, so equal ratios get equal pixel distances.
 * Throws Error(NonpositiveOnLog) for value <= 0 (or lo <= 0) on a log scale and
 * Error(InvalidParams) unless lo < hi.
 */
double scale_map(YScale scale, double lo, double hi, double a, double b, double value);

enum class Severity { Warning, Note };
std::string_view to_string(Severity severity);

struct LintFinding {
    std::string rule_id;
    Severity severity = Severity::Note;
    std::string message;
    std::string subject;

    bool operator==(const LintFinding&) const = default;
};

struct LintRule {
    std::string_view id;
    std::string_view name;
    Severity severity;
    std::string_view description;
};

/// The registered rule set; every finding's rule_id is one of these ids.
std::span<const LintRule> lint_rules();

/// Evaluates every rule. Never throws for a valid spec; findings are ordered
/// by rule id, then subject.
std::vector<LintFinding> lint_chart(const ChartSpec& spec, std::span<const RegionSeries> data);

std::string findings_to_json(std::span<const LintFinding> findings);

struct RenderResult {
    std::string svg;
    /// Notes raised while drawing (points omitted from log panels).
    std::vector<LintFinding> notes;
};

RenderResult render_chart(const ChartSpec& spec, std::span<const RegionSeries> data);

struct CurveReport {
    std::optional<int> upslope_start;
    std::optional<int> peak_day;
    bool downslope_detected = false;
};

/// Centered moving average; the window shrinks at the series edges.
std::vector<double> centered_moving_average(std::span<const double> values, int window = 7);

/// Upslope/peak/downslope features of a propagated epidemic curve, judged on
/// the 7-day smoothed daily counts. Needs at least 14 days.
CurveReport classify_propagated(std::span<const double> daily);
CurveReport classify_propagated(const RegionSeries& series);

} // namespace epicurve
