#include "chart_data.hpp"

#include "epicurve/error.hpp"
#include "epicurve/numfmt.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace epicurve {

namespace {

// Fixed styling; changing any of these invalidates the golden SVG files.
constexpr std::array<const char*, 4> palette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
constexpr double margin_left = 72.0;
constexpr double margin_right = 16.0;
constexpr double margin_top = 40.0;
constexpr double margin_bottom = 44.0;
constexpr double tick_length = 4.0;
constexpr double outlier_fence = 1.5;

std::string px(double v)
{
    return format_fixed(v, 2);
}

std::string escape(std::string_view text)
{
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

double nice_step(double span, int target = 5)
{
    if (!(span > 0))
        return 1.0;
    const double raw = span / target;
    const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / magnitude;
    const double factor = norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0;
    return factor * magnitude;
}

struct Axis {
    YScale scale = YScale::Linear;
    double lo = 0.0;
    double hi = 1.0;
    std::vector<double> ticks;
};

/// Linear axes start at zero and end on a tick; log axes span whole decades.
Axis make_value_axis(YScale scale, std::span<const double> values)
{
    Axis axis;
    axis.scale = scale;
    if (scale == YScale::Linear) {
        double lo = 0.0;
        double hi = 0.0;
        for (double v : values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (!(hi > lo))
            hi = lo + 1.0;
        const double step = nice_step(hi - lo);
        const double first = std::floor(lo / step);
        const double last = std::ceil(hi / step);
        axis.lo = first * step;
        axis.hi = last * step;
        for (double k = first; k <= last; k += 1.0)
            axis.ticks.push_back(k * step);
        return axis;
    }

    double lo = 0.0;
    double hi = 0.0;
    bool any = false;
    for (double v : values) {
        if (v > 0) {
            lo = any ? std::min(lo, v) : v;
            hi = any ? std::max(hi, v) : v;
            any = true;
        }
    }
    if (!any)
        throw Error(ErrorKind::NonpositiveOnLog, "no positive values to draw on a log10 axis");
    const int lo_exp = static_cast<int>(std::floor(std::log10(lo)));
    int hi_exp = static_cast<int>(std::ceil(std::log10(hi)));
    if (hi_exp <= lo_exp)
        hi_exp = lo_exp + 1;
    axis.lo = std::pow(10.0, lo_exp);
    axis.hi = std::pow(10.0, hi_exp);
    for (int e = lo_exp; e <= hi_exp; ++e)
        axis.ticks.push_back(std::pow(10.0, e));
    return axis;
}

struct Frame {
    double left = 0.0;
    double right = 0.0;
    double top = 0.0;
    double bottom = 0.0;
};

class PanelWriter {
public:
    PanelWriter(const ChartSpec& spec, const detail::PlotData& plot, YScale scale, double width,
                double height)
        : m_spec(spec), m_plot(plot), m_scale(scale),
          m_frame{margin_left, width - margin_right, margin_top, height - margin_bottom}
    {
    }

    std::string draw(double offset_x)
    {
        const std::string name(to_string(m_scale));
        m_out += "<g class=\"panel\" id=\"panel-" + name + "\" transform=\"translate(" + px(offset_x) +
                 ",0)\">\n";
        m_out += "<text class=\"panel-title\" x=\"" + px((m_frame.left + m_frame.right) / 2) +
                 "\" y=\"" + px(m_frame.top - 10) + "\" text-anchor=\"middle\">" +
                 (m_scale == YScale::Linear ? "Linear scale" : "Log10 scale") + "</text>\n";
        if (m_spec.panel_kind == PanelKind::Line)
            draw_lines();
        else
            draw_boxes();
        m_out += "</g>\n";
        return std::move(m_out);
    }

private:
    double map_y(const Axis& axis, double v) const
    {
        return scale_map(axis.scale, axis.lo, axis.hi, m_frame.bottom, m_frame.top, v);
    }

    bool drawable(double v) const { return m_scale == YScale::Linear || v > 0; }

    void frame_lines()
    {
        m_out += "<line class=\"axis-line\" x1=\"" + px(m_frame.left) + "\" y1=\"" + px(m_frame.bottom) +
                 "\" x2=\"" + px(m_frame.right) + "\" y2=\"" + px(m_frame.bottom) +
                 "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
        m_out += "<line class=\"axis-line\" x1=\"" + px(m_frame.left) + "\" y1=\"" + px(m_frame.top) +
                 "\" x2=\"" + px(m_frame.left) + "\" y2=\"" + px(m_frame.bottom) +
                 "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    }

    void y_axis(const Axis& axis)
    {
        m_out += "<g class=\"y-axis\">\n";
        for (double t : axis.ticks) {
            const double y = map_y(axis, t);
            m_out += "<line class=\"y-tick\" x1=\"" + px(m_frame.left - tick_length) + "\" y1=\"" + px(y) +
                     "\" x2=\"" + px(m_frame.left) + "\" y2=\"" + px(y) +
                     "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
            m_out += "<text x=\"" + px(m_frame.left - tick_length - 2) + "\" y=\"" + px(y + 4) +
                     "\" text-anchor=\"end\">" + format_general(t) + "</text>\n";
        }
        const double mid = (m_frame.top + m_frame.bottom) / 2;
        m_out += "<text class=\"axis-title\" x=\"14.00\" y=\"" + px(mid) +
                 "\" text-anchor=\"middle\" transform=\"rotate(-90 14.00 " + px(mid) + ")\">" +
                 escape(value_title()) + "</text>\n";
        m_out += "</g>\n";
    }

    std::string value_title() const
    {
        const Column first = m_plot.series.front().ref.column;
        const bool same = std::all_of(m_plot.series.begin(), m_plot.series.end(),
                                      [&](const auto& ps) { return ps.ref.column == first; });
        return same ? std::string(to_string(first)) : "cases";
    }

    void draw_lines()
    {
        std::vector<double> all;
        double x_max = 0.0;
        for (const auto& ps : m_plot.series) {
            all.insert(all.end(), ps.y.begin(), ps.y.end());
            if (!ps.x.empty())
                x_max = std::max(x_max, ps.x.back());
        }
        if (!(x_max > 0))
            x_max = 1.0;
        const Axis axis = make_value_axis(m_scale, all);
        auto map_x = [&](double x) {
            return scale_map(YScale::Linear, 0.0, x_max, m_frame.left, m_frame.right, x);
        };

        frame_lines();
        m_out += "<g class=\"x-axis\">\n";
        const double step = std::max(1.0, nice_step(x_max));
        for (double k = 0; k * step <= x_max + 1e-9; k += 1.0) {
            const double value = k * step;
            const double x = map_x(value);
            std::string label;
            if (m_spec.x_mode == XMode::CalendarDate && m_plot.origin)
                label = format_date(*m_plot.origin + std::chrono::days{static_cast<long>(value)});
            else
                label = format_general(value);
            m_out += "<line class=\"x-tick\" x1=\"" + px(x) + "\" y1=\"" + px(m_frame.bottom) + "\" x2=\"" +
                     px(x) + "\" y2=\"" + px(m_frame.bottom + tick_length) +
                     "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
            m_out += "<text x=\"" + px(x) + "\" y=\"" + px(m_frame.bottom + tick_length + 12) +
                     "\" text-anchor=\"middle\">" + label + "</text>\n";
        }
        m_out += "<text class=\"axis-title\" x=\"" + px((m_frame.left + m_frame.right) / 2) + "\" y=\"" +
                 px(m_frame.bottom + 36) + "\" text-anchor=\"middle\">" +
                 (m_spec.x_mode == XMode::CalendarDate ? "Date" : "Days since P0") + "</text>\n";
        m_out += "</g>\n";
        y_axis(axis);

        m_out += "<g class=\"data\">\n";
        for (std::size_t k = 0; k < m_plot.series.size(); ++k) {
            const auto& ps = m_plot.series[k];
            std::string d;
            bool pen_down = false;
            for (std::size_t j = 0; j < ps.y.size(); ++j) {
                if (!drawable(ps.y[j])) {
                    pen_down = false;
                    continue;
                }
                d += pen_down ? " L" : (d.empty() ? "M" : " M");
                d += px(map_x(ps.x[j])) + " " + px(map_y(axis, ps.y[j]));
                pen_down = true;
            }
            if (d.empty())
                continue;
            m_out += "<path class=\"series\" d=\"" + d + "\" fill=\"none\" stroke=\"" +
                     palette[k % palette.size()] + "\" stroke-width=\"1\"/>\n";
        }
        m_out += "</g>\n";
        legend();
    }

    void legend()
    {
        m_out += "<g class=\"legend\">\n";
        for (std::size_t k = 0; k < m_plot.series.size(); ++k) {
            const double y = m_frame.top + 10 + 14 * static_cast<double>(k);
            const double x = m_frame.left + 8;
            m_out += "<line x1=\"" + px(x) + "\" y1=\"" + px(y) + "\" x2=\"" + px(x + 16) + "\" y2=\"" +
                     px(y) + "\" stroke=\"" + palette[k % palette.size()] + "\" stroke-width=\"1\"/>\n";
            m_out += "<text x=\"" + px(x + 20) + "\" y=\"" + px(y + 4) + "\">" +
                     escape(m_plot.series[k].label) + "</text>\n";
        }
        m_out += "</g>\n";
    }

    void draw_boxes()
    {
        std::vector<std::vector<double>> groups;
        std::vector<double> all;
        for (const auto& ps : m_plot.series) {
            std::vector<double> kept;
            std::copy_if(ps.y.begin(), ps.y.end(), std::back_inserter(kept),
                         [&](double v) { return drawable(v); });
            all.insert(all.end(), kept.begin(), kept.end());
            groups.push_back(std::move(kept));
        }
        const Axis axis = make_value_axis(m_scale, all);

        frame_lines();
        y_axis(axis);

        const double slot = (m_frame.right - m_frame.left) / static_cast<double>(groups.size());
        const double half = std::min(slot * 0.2, 30.0);
        m_out += "<g class=\"x-axis\">\n";
        for (std::size_t k = 0; k < groups.size(); ++k) {
            const double cx = m_frame.left + (static_cast<double>(k) + 0.5) * slot;
            m_out += "<line class=\"x-tick\" x1=\"" + px(cx) + "\" y1=\"" + px(m_frame.bottom) + "\" x2=\"" +
                     px(cx) + "\" y2=\"" + px(m_frame.bottom + tick_length) +
                     "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
            m_out += "<text x=\"" + px(cx) + "\" y=\"" + px(m_frame.bottom + tick_length + 12) +
                     "\" text-anchor=\"middle\">" + escape(m_plot.series[k].label) + "</text>\n";
        }
        m_out += "</g>\n";

        m_out += "<g class=\"data\">\n";
        for (std::size_t k = 0; k < groups.size(); ++k) {
            if (groups[k].empty())
                continue;
            const SummaryStats st = summary_stats(groups[k]);
            const char* color = palette[k % palette.size()];
            const double cx = m_frame.left + (static_cast<double>(k) + 0.5) * slot;
            const double y25 = map_y(axis, st.p25);
            const double y50 = map_y(axis, st.p50);
            const double y75 = map_y(axis, st.p75);
            const double ymin = map_y(axis, st.min);
            const double ymax = map_y(axis, st.max);
            const std::string stroke = "\" stroke=\"" + std::string(color) + "\" stroke-width=\"1\"/>\n";
            auto line = [&](const char* cls, double x1, double y1, double x2, double y2) {
                m_out += "<line class=\"" + std::string(cls) + "\" x1=\"" + px(x1) + "\" y1=\"" + px(y1) +
                         "\" x2=\"" + px(x2) + "\" y2=\"" + px(y2) + stroke;
            };
            m_out += "<g class=\"box\">\n";
            line("whisker", cx, y75, cx, ymax);
            line("whisker", cx, y25, cx, ymin);
            line("whisker-cap", cx - half / 2, ymax, cx + half / 2, ymax);
            line("whisker-cap", cx - half / 2, ymin, cx + half / 2, ymin);
            m_out += "<rect class=\"box-iqr\" x=\"" + px(cx - half) + "\" y=\"" + px(y75) + "\" width=\"" +
                     px(2 * half) + "\" height=\"" + px(y25 - y75) + "\" fill=\"#ffffff\" stroke=\"" +
                     color + "\" stroke-width=\"1\"/>\n";
            line("box-median", cx - half, y50, cx + half, y50);
            if (drawable(st.mean)) {
                m_out += "<circle class=\"box-mean\" cx=\"" + px(cx) + "\" cy=\"" + px(map_y(axis, st.mean)) +
                         "\" r=\"3.00\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1\"/>\n";
            }
            const double iqr = st.p75 - st.p25;
            for (double v : groups[k]) {
                if (v < st.p25 - outlier_fence * iqr || v > st.p75 + outlier_fence * iqr) {
                    m_out += "<circle class=\"outlier\" cx=\"" + px(cx) + "\" cy=\"" + px(map_y(axis, v)) +
                             "\" r=\"2.00\" fill=\"" + color + "\"/>\n";
                }
            }
            m_out += "</g>\n";
        }
        m_out += "</g>\n";
    }

    const ChartSpec& m_spec;
    const detail::PlotData& m_plot;
    YScale m_scale;
    Frame m_frame;
    std::string m_out;
};

} // namespace

RenderResult render_chart(const ChartSpec& spec, std::span<const RegionSeries> data)
{
    validate(spec);
    const detail::PlotData plot = detail::prepare_plot_data(spec, data, true);

    std::vector<YScale> panels;
    if (spec.dual_panel)
        panels = {YScale::Linear, YScale::Log10};
    else
        panels = {spec.y_scale};

    RenderResult result;
    if (detail::has_log_panel(spec)) {
        for (const auto& ps : plot.series) {
            const auto omitted = static_cast<std::size_t>(
                std::count_if(ps.y.begin(), ps.y.end(), [](double v) { return !(v > 0); }));
            if (omitted > 0)
                result.notes.push_back(detail::log_omission_note(ps, omitted));
        }
    }

    const double width = spec.width;
    const double height = spec.height;
    const double panel_width = width / static_cast<double>(panels.size());

    std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(spec.width) +
           "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " + std::to_string(spec.width) +
           " " + std::to_string(spec.height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(spec.width) + "\" height=\"" +
           std::to_string(spec.height) + "\" fill=\"#ffffff\"/>\n";
    svg += "<text class=\"title\" x=\"" + px(width / 2) + "\" y=\"18.00\" text-anchor=\"middle\" font-size=\"14\">" +
           escape(spec.title) + "</text>\n";
    for (std::size_t p = 0; p < panels.size(); ++p) {
        PanelWriter writer(spec, plot, panels[p], panel_width, height);
        svg += writer.draw(panel_width * static_cast<double>(p));
    }
    svg += "</svg>\n";
    result.svg = std::move(svg);
    return result;
}

} // namespace epicurve
