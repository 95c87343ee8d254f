#include "epicurve/ingest.hpp"

#include "epicurve/error.hpp"
#include "epicurve/numfmt.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>

namespace epicurve {

namespace {

constexpr std::array<std::string_view, 3> total_columns = {"total_confirmed", "total_recovered",
                                                          "total_deceased"};

[[noreturn]] void parse_error(std::size_t line, const std::string& what)
{
    throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what);
}

[[noreturn]] void consistency_error(const std::string& region, Date date, const std::string& what)
{
    throw Error(ErrorKind::Consistency, "region '" + region + "', " + format_date(date) + ": " + what);
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

/// Splits one CSV record, honouring double-quoted fields.
std::vector<std::string> split_record(std::string_view line, std::size_t line_no)
{
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char c = line[k];
        if (quoted) {
            if (c == '"') {
                if (k + 1 < line.size() && line[k + 1] == '"') {
                    field += '"';
                    ++k;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && trim(field).empty()) {
            quoted = true;
            was_quoted = true;
            field.clear();
        } else if (c == ',') {
            fields.push_back(was_quoted ? field : std::string(trim(field)));
            field.clear();
            was_quoted = false;
        } else {
            field += c;
        }
    }
    if (quoted)
        parse_error(line_no, "unterminated quoted field");
    fields.push_back(was_quoted ? field : std::string(trim(field)));
    return fields;
}

std::optional<std::int64_t> parse_count(std::string_view text)
{
    std::int64_t value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+')
        ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last)
        return std::nullopt;
    return value;
}

/// Accumulates rows for one region while enforcing date continuity and
/// checking any supplied totals against the running sums.
class SeriesBuilder {
public:
    explicit SeriesBuilder(std::string region) { m_series.region = std::move(region); }

    void add(Date date, std::array<std::int64_t, 3> daily,
             std::array<std::optional<std::int64_t>, 3> totals)
    {
        auto& s = m_series;
        if (!s.dates.empty()) {
            const Date prev = s.dates.back();
            if (date <= prev)
                consistency_error(s.region, date, "dates must be strictly increasing");
            if (date != prev + std::chrono::days{1})
                consistency_error(s.region, date,
                                  "missing date(s) after " + format_date(prev));
        }
        s.dates.push_back(date);
        s.daily_confirmed.push_back(daily[0]);
        s.daily_recovered.push_back(daily[1]);
        s.daily_deceased.push_back(daily[2]);
        auto next_total = [](const std::vector<std::int64_t>& totals_so_far, std::int64_t d) {
            return (totals_so_far.empty() ? 0 : totals_so_far.back()) + d;
        };
        s.total_confirmed.push_back(next_total(s.total_confirmed, daily[0]));
        s.total_recovered.push_back(next_total(s.total_recovered, daily[1]));
        s.total_deceased.push_back(next_total(s.total_deceased, daily[2]));

        const std::array<std::int64_t, 3> derived{s.total_confirmed.back(), s.total_recovered.back(),
                                                  s.total_deceased.back()};
        for (std::size_t c = 0; c < 3; ++c) {
            if (totals[c] && *totals[c] != derived[c])
                consistency_error(s.region, date,
                                  std::string(total_columns[c]) + " is " + std::to_string(*totals[c]) +
                                      " but the running sum of daily values is " +
                                      std::to_string(derived[c]));
        }
    }

    /// Blank daily values default to 0 only before the column's first reported value.
    bool accept_blank(std::size_t column) const { return !m_seen[column]; }
    void mark_seen(std::size_t column) { m_seen[column] = true; }

    RegionSeries take() { return std::move(m_series); }

private:
    RegionSeries m_series;
    std::array<bool, 3> m_seen{};
};

class Collector {
public:
    SeriesBuilder& region(const std::string& name)
    {
        auto it = m_index.find(name);
        if (it == m_index.end()) {
            it = m_index.emplace(name, m_builders.size()).first;
            m_builders.emplace_back(name);
        }
        return m_builders[it->second];
    }

    std::vector<RegionSeries> finish()
    {
        std::vector<RegionSeries> out;
        out.reserve(m_builders.size());
        for (auto& b : m_builders) {
            out.push_back(b.take());
            validate(out.back());
        }
        return out;
    }

private:
    std::map<std::string, std::size_t> m_index;
    std::vector<SeriesBuilder> m_builders;
};

std::vector<RegionSeries> parse_csv(std::string_view document)
{
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= document.size()) {
        const auto end = document.find('\n', pos);
        const auto stop = end == std::string_view::npos ? document.size() : end;
        lines.push_back(document.substr(pos, stop - pos));
        if (end == std::string_view::npos)
            break;
        pos = end + 1;
    }
    while (!lines.empty() && trim(lines.back()).empty())
        lines.pop_back();
    if (lines.empty())
        throw Error(ErrorKind::Parse, "document is empty");

    const auto header = split_record(lines.front(), 1);
    const auto required = split_record(csv_header, 1);
    if (header.size() < required.size() || !std::equal(required.begin(), required.end(), header.begin()))
        parse_error(1, "header must start with '" + std::string(csv_header) + "'");
    const bool has_totals = header.size() == required.size() + total_columns.size();
    if (header.size() != required.size() && !has_totals)
        parse_error(1, "unexpected columns after the required header");
    if (has_totals) {
        for (std::size_t c = 0; c < total_columns.size(); ++c) {
            if (header[required.size() + c] != total_columns[c])
                parse_error(1, "optional total columns must be '" + std::string(total_columns[0]) + "," +
                                   std::string(total_columns[1]) + "," +
                                   std::string(total_columns[2]) + "'");
        }
    }

    Collector collector;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const std::size_t line_no = k + 1;
        if (trim(lines[k]).empty())
            parse_error(line_no, "blank line inside data");
        const auto fields = split_record(lines[k], line_no);
        if (fields.size() != header.size())
            parse_error(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                     std::to_string(fields.size()));
        const auto date = parse_date(fields[0]);
        if (!date)
            parse_error(line_no, "invalid date '" + fields[0] + "' (expected YYYY-MM-DD)");
        if (fields[1].empty())
            parse_error(line_no, "empty region name");

        SeriesBuilder& builder = collector.region(fields[1]);
        std::array<std::int64_t, 3> daily{};
        for (std::size_t c = 0; c < 3; ++c) {
            const std::string& text = fields[2 + c];
            if (text.empty()) {
                if (!builder.accept_blank(c))
                    parse_error(line_no, "missing value for " + required[2 + c]);
                continue;
            }
            const auto value = parse_count(text);
            if (!value)
                parse_error(line_no, "invalid count '" + text + "' for " + required[2 + c]);
            if (*value < 0)
                parse_error(line_no, "negative count for " + required[2 + c]);
            daily[c] = *value;
            builder.mark_seen(c);
        }
        std::array<std::optional<std::int64_t>, 3> totals{};
        if (has_totals) {
            for (std::size_t c = 0; c < 3; ++c) {
                const std::string& text = fields[5 + c];
                if (text.empty())
                    continue;
                const auto value = parse_count(text);
                if (!value || *value < 0)
                    parse_error(line_no, "invalid count '" + text + "' for " + std::string(total_columns[c]));
                totals[c] = *value;
            }
        }
        builder.add(*date, daily, totals);
    }
    return collector.finish();
}

std::vector<RegionSeries> parse_json(std::string_view document)
{
    nlohmann::ordered_json root;
    try {
        root = nlohmann::ordered_json::parse(document);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::Parse, std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object())
        throw Error(ErrorKind::Parse, "JSON document must be an object keyed by region");

    static constexpr std::array<const char*, 3> daily_keys{"dc", "dr", "dd"};
    static constexpr std::array<const char*, 3> total_keys{"tc", "tr", "td"};

    Collector collector;
    for (const auto& [region, rows] : root.items()) {
        if (!rows.is_array())
            throw Error(ErrorKind::Parse, "region '" + region + "': expected an array of rows");
        SeriesBuilder& builder = collector.region(region);
        std::size_t index = 0;
        for (const auto& row : rows) {
            const std::string where = "region '" + region + "', row " + std::to_string(index++);
            if (!row.is_object() || !row.contains("date") || !row["date"].is_string())
                throw Error(ErrorKind::Parse, where + ": missing string field 'date'");
            const auto date = parse_date(row["date"].get<std::string>());
            if (!date)
                throw Error(ErrorKind::Parse, where + ": invalid date");

            auto read = [&](const char* key) -> std::optional<std::int64_t> {
                if (!row.contains(key) || row[key].is_null())
                    return std::nullopt;
                const auto& v = row[key];
                if (!v.is_number_integer())
                    throw Error(ErrorKind::Parse, where + ": field '" + key + "' must be an integer");
                const auto value = v.get<std::int64_t>();
                if (value < 0)
                    throw Error(ErrorKind::Parse, where + ": negative count in '" + key + "'");
                return value;
            };

            std::array<std::int64_t, 3> daily{};
            for (std::size_t c = 0; c < 3; ++c) {
                const auto value = read(daily_keys[c]);
                if (!value) {
                    if (!builder.accept_blank(c))
                        throw Error(ErrorKind::Parse, where + ": missing '" + daily_keys[c] + "'");
                    continue;
                }
                daily[c] = *value;
                builder.mark_seen(c);
            }
            std::array<std::optional<std::int64_t>, 3> totals{};
            for (std::size_t c = 0; c < 3; ++c)
                totals[c] = read(total_keys[c]);
            builder.add(*date, daily, totals);
        }
    }
    return collector.finish();
}

std::string quote_if_needed(const std::string& field)
{
    if (field.find_first_of(",\"") == std::string::npos && trim(field) == field)
        return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

std::optional<Date> parse_date(std::string_view text)
{
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        return std::nullopt;
    auto number = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
        int value = 0;
        for (std::size_t k = pos; k < pos + len; ++k) {
            if (text[k] < '0' || text[k] > '9')
                return std::nullopt;
            value = value * 10 + (text[k] - '0');
        }
        return value;
    };
    const auto y = number(0, 4);
    const auto m = number(5, 2);
    const auto d = number(8, 2);
    if (!y || !m || !d)
        return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{*y},
                                          std::chrono::month{static_cast<unsigned>(*m)},
                                          std::chrono::day{static_cast<unsigned>(*d)}};
    if (!ymd.ok())
        return std::nullopt;
    return Date{ymd};
}

std::string format_date(Date date)
{
    const std::chrono::year_month_day ymd{date};
    std::array<char, 16> buf{};
    const int y = static_cast<int>(ymd.year());
    const unsigned m = static_cast<unsigned>(ymd.month());
    const unsigned d = static_cast<unsigned>(ymd.day());
    std::string out;
    auto pad = [&](long value, int width) {
        auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
        std::string digits(buf.data(), end);
        while (static_cast<int>(digits.size()) < width)
            digits.insert(digits.begin(), '0');
        out += digits;
    };
    pad(y, 4);
    out += '-';
    pad(m, 2);
    out += '-';
    pad(d, 2);
    return out;
}

std::string_view to_string(Column column)
{
    switch (column) {
    case Column::DailyConfirmed: return "daily_confirmed";
    case Column::TotalConfirmed: return "total_confirmed";
    case Column::DailyRecovered: return "daily_recovered";
    case Column::TotalRecovered: return "total_recovered";
    case Column::DailyDeceased: return "daily_deceased";
    case Column::TotalDeceased: return "total_deceased";
    }
    return "daily_confirmed";
}

std::optional<Column> parse_column(std::string_view name)
{
    for (Column c : all_columns) {
        if (to_string(c) == name)
            return c;
    }
    return std::nullopt;
}

std::vector<double> column_values(const RegionSeries& series, Column column)
{
    const std::vector<std::int64_t>* source = nullptr;
    switch (column) {
    case Column::DailyConfirmed: source = &series.daily_confirmed; break;
    case Column::TotalConfirmed: source = &series.total_confirmed; break;
    case Column::DailyRecovered: source = &series.daily_recovered; break;
    case Column::TotalRecovered: source = &series.total_recovered; break;
    case Column::DailyDeceased: source = &series.daily_deceased; break;
    case Column::TotalDeceased: source = &series.total_deceased; break;
    }
    return {source->begin(), source->end()};
}

RegionSeries make_region_series(std::string region, Date start,
                                std::vector<std::int64_t> daily_confirmed,
                                std::vector<std::int64_t> daily_recovered,
                                std::vector<std::int64_t> daily_deceased)
{
    const std::size_t n = daily_confirmed.size();
    if (daily_recovered.empty())
        daily_recovered.assign(n, 0);
    if (daily_deceased.empty())
        daily_deceased.assign(n, 0);
    if (daily_recovered.size() != n || daily_deceased.size() != n)
        throw Error(ErrorKind::Consistency, "region '" + region + "': daily columns differ in length");

    RegionSeries s;
    s.region = std::move(region);
    for (std::size_t k = 0; k < n; ++k)
        s.dates.push_back(start + std::chrono::days{static_cast<long>(k)});
    s.total_confirmed = derive_cumulative(daily_confirmed);
    s.total_recovered = derive_cumulative(daily_recovered);
    s.total_deceased = derive_cumulative(daily_deceased);
    s.daily_confirmed = std::move(daily_confirmed);
    s.daily_recovered = std::move(daily_recovered);
    s.daily_deceased = std::move(daily_deceased);
    return s;
}

void validate(const RegionSeries& s)
{
    const std::size_t n = s.dates.size();
    for (const auto* column : {&s.daily_confirmed, &s.daily_recovered, &s.daily_deceased,
                               &s.total_confirmed, &s.total_recovered, &s.total_deceased}) {
        if (column->size() != n)
            throw Error(ErrorKind::Consistency, "region '" + s.region + "': columns differ in length");
    }
    const std::array<std::pair<const std::vector<std::int64_t>*, const std::vector<std::int64_t>*>, 3>
        pairs{{{&s.daily_confirmed, &s.total_confirmed},
               {&s.daily_recovered, &s.total_recovered},
               {&s.daily_deceased, &s.total_deceased}}};
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0 && s.dates[k] != s.dates[k - 1] + std::chrono::days{1})
            consistency_error(s.region, s.dates[k], "dates must be consecutive");
        for (const auto& [daily, total] : pairs) {
            if ((*daily)[k] < 0 || (*total)[k] < 0)
                consistency_error(s.region, s.dates[k], "negative count");
            const std::int64_t expected = (k == 0 ? 0 : (*total)[k - 1]) + (*daily)[k];
            if ((*total)[k] != expected)
                consistency_error(s.region, s.dates[k], "cumulative count is not the running sum");
        }
    }
}

std::vector<RegionSeries> parse_timeseries(std::string_view document)
{
    const auto first = document.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        throw Error(ErrorKind::Parse, "document is empty");
    if (document[first] == '{')
        return parse_json(document);
    return parse_csv(document);
}

std::string serialize_timeseries(std::span<const RegionSeries> collection)
{
    std::string out(csv_header);
    out += '\n';
    for (const auto& s : collection) {
        const std::string region = quote_if_needed(s.region);
        for (std::size_t k = 0; k < s.size(); ++k) {
            out += format_date(s.dates[k]);
            out += ',';
            out += region;
            for (auto v : {s.daily_confirmed[k], s.daily_recovered[k], s.daily_deceased[k]}) {
                out += ',';
                out += std::to_string(v);
            }
            out += '\n';
        }
    }
    return out;
}

std::vector<std::int64_t> derive_cumulative(std::span<const std::int64_t> daily)
{
    std::vector<std::int64_t> out;
    out.reserve(daily.size());
    std::int64_t running = 0;
    for (std::size_t k = 0; k < daily.size(); ++k) {
        if (daily[k] < 0)
            throw Error(ErrorKind::InvalidCount,
                        "negative daily count " + std::to_string(daily[k]) + " at index " + std::to_string(k));
        running += daily[k];
        out.push_back(running);
    }
    return out;
}

AlignedSeries align_p0(const RegionSeries& series)
{
    const auto it = std::find_if(series.total_confirmed.begin(), series.total_confirmed.end(),
                                 [](std::int64_t v) { return v >= 1; });
    if (it == series.total_confirmed.end())
        throw Error(ErrorKind::NoCases, "region '" + series.region + "' has no confirmed cases");
    const auto offset = static_cast<std::size_t>(it - series.total_confirmed.begin());

    auto tail = [offset](const std::vector<std::int64_t>& v) {
        return std::vector<std::int64_t>(v.begin() + static_cast<std::ptrdiff_t>(offset), v.end());
    };
    AlignedSeries aligned;
    aligned.offset = static_cast<int>(offset);
    aligned.p0 = series.dates[offset];
    RegionSeries& s = aligned.series;
    s.region = series.region;
    s.dates.assign(series.dates.begin() + static_cast<std::ptrdiff_t>(offset), series.dates.end());
    s.daily_confirmed = tail(series.daily_confirmed);
    s.daily_recovered = tail(series.daily_recovered);
    s.daily_deceased = tail(series.daily_deceased);
    s.total_confirmed = tail(series.total_confirmed);
    s.total_recovered = tail(series.total_recovered);
    s.total_deceased = tail(series.total_deceased);
    s.daily_recovered.front() = s.total_recovered.front();
    s.daily_deceased.front() = s.total_deceased.front();
    return aligned;
}

double quantile_sorted(std::span<const double> sorted, double q)
{
    if (sorted.empty())
        throw Error(ErrorKind::InsufficientData, "quantile of an empty sequence");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

SummaryStats summary_stats(std::span<const double> values)
{
    if (values.empty())
        throw Error(ErrorKind::InsufficientData, "summary statistics need at least one value");
    for (double v : values) {
        if (!std::isfinite(v))
            throw Error(ErrorKind::InvalidParams, "summary statistics need finite values");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    const auto n = static_cast<double>(sorted.size());
    double sum = 0.0;
    for (double v : sorted)
        sum += v;
    const double mean = sum / n;
    double squares = 0.0;
    for (double v : sorted)
        squares += (v - mean) * (v - mean);

    SummaryStats st;
    st.count = sorted.size();
    st.mean = mean;
    st.std_dev = sorted.size() > 1 ? std::sqrt(squares / (n - 1.0)) : 0.0;
    st.min = sorted.front();
    st.p25 = quantile_sorted(sorted, 0.25);
    st.p50 = quantile_sorted(sorted, 0.50);
    st.p75 = quantile_sorted(sorted, 0.75);
    st.max = sorted.back();
    return st;
}

std::string stats_to_csv(std::span<const std::pair<std::string, SummaryStats>> columns)
{
    std::string out = "statistic";
    for (const auto& [name, stats] : columns)
        out += ',' + quote_if_needed(name);
    out += '\n';

    using Getter = double (*)(const SummaryStats&);
    const std::array<std::pair<const char*, Getter>, 8> rows{{
        {"Count", [](const SummaryStats& s) { return static_cast<double>(s.count); }},
        {"Mean", [](const SummaryStats& s) { return s.mean; }},
        {"Std", [](const SummaryStats& s) { return s.std_dev; }},
        {"Min", [](const SummaryStats& s) { return s.min; }},
        {"P25", [](const SummaryStats& s) { return s.p25; }},
        {"P50", [](const SummaryStats& s) { return s.p50; }},
        {"P75", [](const SummaryStats& s) { return s.p75; }},
        {"Max", [](const SummaryStats& s) { return s.max; }},
    }};
    for (const auto& [label, get] : rows) {
        out += label;
        for (const auto& [name, stats] : columns) {
            out += ',';
            out += format_general(get(stats));
        }
        out += '\n';
    }
    return out;
}

} // namespace epicurve
