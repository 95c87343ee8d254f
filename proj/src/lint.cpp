#include "chart_data.hpp"

#include "epicurve/error.hpp"
#include "epicurve/numfmt.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <set>

namespace epicurve {

namespace {

constexpr double magnitude_ratio_threshold = 100.0;
constexpr double testing_growth_factor = 4.0;
constexpr double min_aspect = 0.5;
constexpr double max_aspect = 5.0;

constexpr std::array<LintRule, 6> rules{{
    {"R1", "scale-choice", Severity::Warning,
     "Linear y-axis over data spanning two or more orders of magnitude; a semi-log view is recommended."},
    {"R2", "multi-group-linear", Severity::Note,
     "Two or more population groups compared on a linear y-axis; a log axis compares growth rates."},
    {"R3", "alignment-disclosure", Severity::Note,
     "Days-since-P0 alignment hides differing onset dates; calendar dates hide differing outbreak ages."},
    {"R4", "testing-confound", Severity::Note,
     "Testing volume grew more than fourfold; case growth may partly reflect testing growth."},
    {"R5", "aspect-ratio", Severity::Note,
     "Width:height outside [1:2, 5:1] exaggerates or flattens slopes."},
    {"R6", "log-nonpositive-omitted", Severity::Note,
     "Zero or negative values cannot be drawn on a log axis and were omitted."},
}};

double mean_of(std::span<const double> v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void check_scale_choice(const ChartSpec& spec, const detail::PlotData& plot,
                        std::vector<LintFinding>& out)
{
    if (!detail::has_linear_only_view(spec))
        return;
    for (const auto& ps : plot.series) {
        double min_positive = 0.0;
        double max_value = 0.0;
        bool any_positive = false;
        for (double v : ps.y) {
            if (v > 0) {
                min_positive = any_positive ? std::min(min_positive, v) : v;
                any_positive = true;
            }
            max_value = std::max(max_value, v);
        }
        if (!any_positive)
            continue;
        const double ratio = max_value / min_positive;
        if (ratio >= magnitude_ratio_threshold) {
            out.push_back({"R1", Severity::Warning,
                           "values range from " + format_general(min_positive) + " to " +
                               format_general(max_value) + " (" +
                               format_fixed(std::log10(ratio), 1) +
                               " orders of magnitude) on a linear y-axis; a semi-log (log10) "
                               "y-axis is recommended for epidemic growth. Many readers misread "
                               "semi-log charts, so consider showing both views side by side",
                           ps.label});
        }
    }
}

void check_multi_group(const ChartSpec& spec, const std::set<std::string>& regions,
                       std::vector<LintFinding>& out)
{
    if (regions.size() < 2 || !detail::has_linear_only_view(spec))
        return;
    out.push_back({"R2", Severity::Note,
                   std::to_string(regions.size()) +
                       " population groups are compared on a linear y-axis; a log10 axis "
                       "makes their growth rates directly comparable",
                   "y-axis"});
}

void check_alignment(const ChartSpec& spec, const detail::PlotData& plot,
                     const std::set<std::string>& regions, std::vector<LintFinding>& out)
{
    if (regions.size() < 2)
        return;
    if (spec.x_mode == XMode::CalendarDate) {
        out.push_back({"R3", Severity::Note,
                       "regions are plotted against calendar dates; outbreaks that began on "
                       "different dates are at different stages, so also view the chart in "
                       "days since P0",
                       "x-axis"});
        return;
    }

    // First P0 per region, in plotting order.
    std::vector<std::pair<std::string, Date>> onsets;
    for (const auto& ps : plot.series) {
        if (!ps.p0)
            continue;
        const bool seen = std::any_of(onsets.begin(), onsets.end(),
                                      [&](const auto& o) { return o.first == ps.ref.region; });
        if (!seen)
            onsets.emplace_back(ps.ref.region, *ps.p0);
    }
    if (onsets.size() < 2)
        return;
    const auto [earliest, latest] = std::minmax_element(
        onsets.begin(), onsets.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    const auto spread = (latest->second - earliest->second).count();
    if (spread == 0)
        return;

    std::string message = "aligning on days since P0 hides that the first cases were recorded on "
                          "different dates (";
    for (std::size_t k = 0; k < onsets.size(); ++k) {
        if (k > 0)
            message += "; ";
        const auto lag = (onsets[k].second - earliest->second).count();
        message += onsets[k].first + ": " + format_date(onsets[k].second) + ", +" +
                   std::to_string(lag) + " days";
    }
    message += "); " + latest->first + " had its first case " + std::to_string(spread) +
               " days after " + earliest->first;
    out.push_back({"R3", Severity::Note, message, "x-axis"});
}

void check_testing(const ChartSpec& spec, std::vector<LintFinding>& out)
{
    const auto& tests = spec.testing_volume;
    if (tests.size() < 4)
        return;
    const std::size_t quarter = tests.size() / 4;
    const std::span<const double> all(tests);
    const double first = mean_of(all.first(quarter));
    const double last = mean_of(all.last(quarter));
    if (last > testing_growth_factor * first) {
        out.push_back({"R4", Severity::Note,
                       "mean testing volume rose from " + format_general(first, 6) + " to " +
                           format_general(last, 6) +
                           " per day between the first and last quarter of the period; growth "
                           "in confirmed cases may partly reflect growth in testing",
                       "testing"});
    }
}

void check_aspect(const ChartSpec& spec, std::vector<LintFinding>& out)
{
    if (spec.width <= 0 || spec.height <= 0)
        return;
    const double aspect = static_cast<double>(spec.width) / spec.height;
    if (aspect < min_aspect || aspect > max_aspect) {
        out.push_back({"R5", Severity::Note,
                       "width:height is " + std::to_string(spec.width) + ":" +
                           std::to_string(spec.height) +
                           ", outside [1:2, 5:1]; extreme aspect ratios exaggerate or flatten slopes",
                       "canvas"});
    }
}

void check_log_omissions(const ChartSpec& spec, const detail::PlotData& plot,
                         std::vector<LintFinding>& out)
{
    if (!detail::has_log_panel(spec))
        return;
    for (const auto& ps : plot.series) {
        const auto omitted = static_cast<std::size_t>(
            std::count_if(ps.y.begin(), ps.y.end(), [](double v) { return !(v > 0); }));
        if (omitted > 0)
            out.push_back(detail::log_omission_note(ps, omitted));
    }
}

} // namespace

std::span<const LintRule> lint_rules()
{
    return rules;
}

std::vector<LintFinding> lint_chart(const ChartSpec& spec, std::span<const RegionSeries> data)
{
    const detail::PlotData plot = detail::prepare_plot_data(spec, data, false);
    std::set<std::string> regions;
    for (const auto& ps : plot.series)
        regions.insert(ps.ref.region);

    std::vector<LintFinding> findings;
    check_scale_choice(spec, plot, findings);
    check_multi_group(spec, regions, findings);
    check_alignment(spec, plot, regions, findings);
    check_testing(spec, findings);
    check_aspect(spec, findings);
    check_log_omissions(spec, plot, findings);

    std::stable_sort(findings.begin(), findings.end(), [](const LintFinding& a, const LintFinding& b) {
        if (a.rule_id != b.rule_id)
            return a.rule_id < b.rule_id;
        return a.subject < b.subject;
    });
    return findings;
}

std::string findings_to_json(std::span<const LintFinding> findings)
{
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto& f : findings) {
        out.push_back({{"rule_id", f.rule_id},
                       {"severity", to_string(f.severity)},
                       {"message", f.message},
                       {"subject", f.subject}});
    }
    return out.dump(2) + "\n";
}

} // namespace epicurve
