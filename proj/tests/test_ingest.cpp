#include "doctest.h"

#include "epicurve/error.hpp"
#include "epicurve/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

using namespace epicurve;
using namespace std::chrono;

namespace {

Date ymd(int y, unsigned m, unsigned d)
{
    return sys_days{year{y} / month{m} / d};
}

Error error_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e;
    }
    FAIL("expected an epicurve::Error");
    return Error(ErrorKind::NoData, "");
}

std::string fixture(const std::string& name)
{
    std::ifstream in(std::string(EPICURVE_FIXTURES) + "/" + name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("dates")
{
    CHECK(parse_date("2020-01-30") == ymd(2020, 1, 30));
    CHECK(parse_date("2020-02-29").has_value());
    CHECK_FALSE(parse_date("2021-02-29").has_value());
    CHECK_FALSE(parse_date("2020-1-30").has_value());
    CHECK_FALSE(parse_date("30/01/2020").has_value());
    CHECK_FALSE(parse_date("2020-01-30 ").has_value());
    CHECK(format_date(ymd(2020, 8, 28)) == "2020-08-28");
}

TEST_CASE("derive_cumulative")
{
    using V = std::vector<std::int64_t>;
    CHECK(derive_cumulative(V{1, 2, 3}) == V{1, 3, 6});
    CHECK(derive_cumulative(V{}) == V{});
    CHECK(derive_cumulative(V{0, 0, 5}) == V{0, 0, 5});
    CHECK(error_of([] { derive_cumulative(V{1, -1}); }).kind() == ErrorKind::InvalidCount);
}

TEST_CASE("parse CSV: three rows with derived totals")
{
    const auto all = parse_timeseries("date,region,daily_confirmed,daily_recovered,daily_deceased\n"
                                      "2020-03-01,Kerala,1,0,0\n"
                                      "2020-03-02,Kerala,2,1,0\n"
                                      "2020-03-03,Kerala,3,0,1\n");
    REQUIRE(all.size() == 1);
    const auto& s = all[0];
    CHECK(s.region == "Kerala");
    CHECK(s.size() == 3);
    CHECK(s.dates.front() == ymd(2020, 3, 1));
    CHECK(s.total_confirmed == std::vector<std::int64_t>{1, 3, 6});
    CHECK(s.total_recovered == std::vector<std::int64_t>{0, 1, 1});
    CHECK(s.total_deceased == std::vector<std::int64_t>{0, 0, 1});
}

TEST_CASE("parse CSV: malformed rows report the line")
{
    const std::string head = std::string(csv_header) + "\n";
    auto e = error_of([&] { parse_timeseries(head + "2020-03-01,A,1,0,0\n2020-03-02,A,-4,0,0\n"); });
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);

    e = error_of([&] { parse_timeseries(head + "2020-03-01,A,1.5,0,0\n"); });
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);

    CHECK(error_of([&] { parse_timeseries(head + "2020-03-01,A,1,0\n"); }).kind() == ErrorKind::Parse);
    CHECK(error_of([&] { parse_timeseries(head + "03/01/2020,A,1,0,0\n"); }).kind() == ErrorKind::Parse);
    CHECK(error_of([&] { parse_timeseries("date,region,confirmed\n"); }).kind() == ErrorKind::Parse);
    CHECK(error_of([&] { parse_timeseries(""); }).kind() == ErrorKind::Parse);
}

TEST_CASE("parse CSV: consistency errors name region and date")
{
    const std::string head = std::string(csv_header) + "\n";
    auto e = error_of([&] { parse_timeseries(head + "2020-03-01,Goa,1,0,0\n2020-03-03,Goa,1,0,0\n"); });
    CHECK(e.kind() == ErrorKind::Consistency);
    CHECK(std::string(e.what()).find("Goa") != std::string::npos);
    CHECK(std::string(e.what()).find("2020-03-03") != std::string::npos);

    e = error_of([&] {
        parse_timeseries("date,region,daily_confirmed,daily_recovered,daily_deceased,total_confirmed,"
                         "total_recovered,total_deceased\n"
                         "2020-03-01,Goa,1,0,0,1,0,0\n"
                         "2020-03-02,Goa,2,0,0,4,0,0\n");
    });
    CHECK(e.kind() == ErrorKind::Consistency);
    CHECK(std::string(e.what()).find("Goa") != std::string::npos);
    CHECK(std::string(e.what()).find("2020-03-02") != std::string::npos);
}

TEST_CASE("parse CSV: leading blanks read as zero, later blanks do not")
{
    const std::string head = std::string(csv_header) + "\n";
    const auto all = parse_timeseries(head + "2020-03-01,A,1,,\n2020-03-02,A,2,1,\n2020-03-03,A,0,0,1\n");
    CHECK(all[0].daily_recovered == std::vector<std::int64_t>{0, 1, 0});
    CHECK(all[0].daily_deceased == std::vector<std::int64_t>{0, 0, 1});
    CHECK(error_of([&] { parse_timeseries(head + "2020-03-01,A,1,1,0\n2020-03-02,A,2,,0\n"); }).kind() ==
          ErrorKind::Parse);
}

TEST_CASE("parse CSV: several regions and quoted fields")
{
    const auto all = parse_timeseries(std::string(csv_header) +
                                      "\r\n2020-03-01,\"Jammu, Kashmir\",1,0,0\r\n"
                                      "2020-03-01,Delhi,0,0,0\r\n"
                                      "2020-03-02,\"Jammu, Kashmir\",0,0,0\r\n");
    REQUIRE(all.size() == 2);
    CHECK(all[0].region == "Jammu, Kashmir");
    CHECK(all[0].size() == 2);
    CHECK(all[1].region == "Delhi");
}

TEST_CASE("parse JSON mirror")
{
    const auto all = parse_timeseries(R"({"Delhi": [
        {"date": "2020-03-02", "dc": 1, "dr": 0, "dd": 0},
        {"date": "2020-03-03", "dc": 4, "dr": 1, "dd": 0, "tc": 5}
    ], "Punjab": [{"date": "2020-03-09", "dc": 1, "dr": 0, "dd": 0}]})");
    REQUIRE(all.size() == 2);
    CHECK(all[0].region == "Delhi");
    CHECK(all[0].total_confirmed == std::vector<std::int64_t>{1, 5});
    CHECK(all[1].region == "Punjab");
    CHECK(error_of([] { parse_timeseries(R"({"A": [{"date": "2020-03-02", "dc": -1, "dr": 0, "dd": 0}]})"); })
              .kind() == ErrorKind::Parse);
    CHECK(error_of([] { parse_timeseries(R"({"A": [{"date": "2020-03-02", "dc": 2, "tc": 3}]})"); }).kind() ==
          ErrorKind::Consistency);
    CHECK(error_of([] { parse_timeseries("{not json"); }).kind() == ErrorKind::Parse);
}

TEST_CASE("serialize and re-parse round trip")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> count(0, 100000);
    std::uniform_int_distribution<int> len(1, 60);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<RegionSeries> coll;
        for (int r = 0; r < 1 + trial % 3; ++r) {
            const int n = len(rng);
            std::vector<std::int64_t> dc(n), dr(n), dd(n);
            for (int k = 0; k < n; ++k) {
                dc[k] = count(rng);
                dr[k] = count(rng) / 2;
                dd[k] = count(rng) / 50;
            }
            coll.push_back(make_region_series("R" + std::to_string(r), ymd(2020, 1, 30) + days{trial + r},
                                              dc, dr, dd));
        }
        const std::string text = serialize_timeseries(coll);
        CHECK(text.rfind(std::string(csv_header) + "\n", 0) == 0);
        const auto back = parse_timeseries(text);
        REQUIRE(back == coll);
        for (const auto& s : back) {
            CHECK(derive_cumulative(s.daily_confirmed) == s.total_confirmed);
            CHECK(derive_cumulative(s.daily_recovered) == s.total_recovered);
            CHECK(derive_cumulative(s.daily_deceased) == s.total_deceased);
        }
    }
}

TEST_CASE("fixtures parse and keep their documented shape")
{
    const auto wide = parse_timeseries(fixture("wide_range.csv"));
    REQUIRE(wide.size() == 1);
    CHECK(wide[0].size() == 168);
    const auto dc = column_values(wide[0], Column::DailyConfirmed);
    CHECK(*std::min_element(dc.begin(), dc.end()) == 3);
    CHECK(*std::max_element(dc.begin(), dc.end()) == 14888);

    const auto pair = parse_timeseries(fixture("onset_pair.csv"));
    REQUIRE(pair.size() == 2);
    CHECK(align_p0(pair[1]).offset - align_p0(pair[0]).offset == 15);
}

TEST_CASE("align_p0")
{
    const auto a = align_p0(make_region_series("A", ymd(2020, 3, 1), {2, 0, 3}));
    CHECK(a.offset == 0);
    CHECK(a.p0 == ymd(2020, 3, 1));
    CHECK(a.series.size() == 3);

    const auto b = align_p0(make_region_series("B", ymd(2020, 3, 1), {0, 0, 0, 1, 5}, {0, 0, 0, 0, 1}));
    CHECK(b.offset == 3);
    CHECK(b.p0 == ymd(2020, 3, 4));
    CHECK(b.series.daily_confirmed == std::vector<std::int64_t>{1, 5});
    CHECK(b.series.dates.front() == b.p0);

    // Pre-P0 removals are folded into day 0 so totals still match.
    const auto c = align_p0(make_region_series("C", ymd(2020, 3, 1), {0, 1, 1}, {0, 0, 0}, {1, 0, 0}));
    CHECK(c.series.total_deceased.back() == 1);
    validate(c.series);

    CHECK(error_of([] { align_p0(make_region_series("Z", ymd(2020, 3, 1), {0, 0, 0})); }).kind() ==
          ErrorKind::NoCases);

    // Idempotence.
    for (const auto& s : {a, b, c}) {
        const auto again = align_p0(s.series);
        CHECK(again.offset == 0);
        CHECK(again.series == s.series);
    }
}

TEST_CASE("summary_stats")
{
    const auto s = summary_stats(std::vector<double>{0, 1, 2, 3, 4});
    CHECK(s.count == 5);
    CHECK(s.mean == 2);
    CHECK(s.std_dev == doctest::Approx(std::sqrt(2.5)).epsilon(1e-14));
    CHECK(std::abs(s.std_dev - 1.5811) <= 1e-4);
    CHECK(s.min == 0);
    CHECK(s.p25 == 1);
    CHECK(s.p50 == 2);
    CHECK(s.p75 == 3);
    CHECK(s.max == 4);

    const auto c = summary_stats(std::vector<double>{7, 7, 7});
    CHECK(c.std_dev == 0);
    CHECK(c.p25 == 7);
    CHECK(c.p50 == 7);
    CHECK(c.p75 == 7);

    const auto one = summary_stats(std::vector<double>{3});
    CHECK(one.count == 1);
    CHECK(one.std_dev == 0);

    // Six values: the quartile ranks are fractional (h = 1.25, 3.75).
    const auto f = summary_stats(std::vector<double>{10, 0, 40, 20, 50, 30});
    CHECK(f.p25 == doctest::Approx(12.5));
    CHECK(f.p50 == doctest::Approx(25));
    CHECK(f.p75 == doctest::Approx(37.5));

    CHECK(error_of([] { summary_stats(std::vector<double>{}); }).kind() == ErrorKind::InsufficientData);
}

TEST_CASE("summary_stats: ordering holds for random data")
{
    std::mt19937_64 rng(99);
    std::lognormal_distribution<double> dist(3, 2);
    std::uniform_int_distribution<int> len(1, 300);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> v(len(rng));
        for (auto& x : v)
            x = std::floor(dist(rng));
        const auto s = summary_stats(v);
        CHECK(s.count == v.size());
        CHECK(s.min <= s.p25);
        CHECK(s.p25 <= s.p50);
        CHECK(s.p50 <= s.p75);
        CHECK(s.p75 <= s.max);
        CHECK(s.std_dev >= 0);
        CHECK(s.mean >= s.min);
        CHECK(s.mean <= s.max);
    }
}

TEST_CASE("stats CSV layout")
{
    std::vector<std::pair<std::string, SummaryStats>> cols{
        {"daily_confirmed", summary_stats(std::vector<double>{0, 1, 2, 3, 4})}};
    const std::string csv = stats_to_csv(cols);
    CHECK(csv.rfind("statistic,daily_confirmed\nCount,5\nMean,2\nStd,1.58113883008\nMin,0\n"
                    "P25,1\nP50,2\nP75,3\nMax,4\n",
                    0) == 0);
}
