#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "impactis/errors.hpp"
#include "impactis/indicators.hpp"
#include "impactis/report.hpp"

using namespace impactis;
using impactis::testing::art;
using impactis::testing::make_corpus;

namespace {

indicators::IndicatorTable small_table() {
    indicators::IndicatorTable t;
    t.metric = indicators::Indicator::afyncc;
    const auto set = [&](const std::string& c, int y, double v, bool valid,
                         const std::string& reason = "") {
        indicators::IndicatorCell cell;
        cell.value = valid ? v : 0.0;
        cell.output = valid ? 1.0 : 0.0;
        cell.valid = valid;
        cell.reason = reason;
        t.cells.emplace(indicators::CountryYear{c, y}, cell);
    };
    set("GB", 2011, 1.31, true);
    set("GB", 2012, 1.05, true);
    set("GB", 2013, 0.97, true);
    set("IT", 2011, 0.88, true);
    set("IT", 2012, 0.0, false, std::string(indicators::kReasonZeroOutput));
    set("IT", 2013, 0.91, true);
    return t;
}

}  // namespace

TEST_CASE("summary ratios render at two decimals, half to even") {
    const auto row_2009 = report::make_summary_row(2009, 137905, 1975043, 1625447);
    CHECK(report::format_ratio(row_2009.citations_per_article) == "14.32");
    CHECK(report::format_ratio(row_2009.readers_per_article) == "11.79");
    CHECK(report::format_ratio(row_2009.citations_per_reader) == "1.22");

    const auto row_2015 = report::make_summary_row(2015, 71516, 8426, 36416);
    CHECK(report::format_ratio(row_2015.citations_per_article) == "0.12");
    CHECK(report::format_ratio(row_2015.readers_per_article) == "0.51");
    CHECK(report::format_ratio(row_2015.citations_per_reader) == "0.23");

    CHECK(report::format_ratio(0.125) == "0.12");  // tie to even
    CHECK(report::format_ratio(0.375) == "0.38");
}

TEST_CASE("summarize totals are exact column sums") {
    const auto c = make_corpus({
        art("a", "f", 2009, {"GB"}, 10, 20),
        art("b", "f", 2009, {"DE"}, 4, 0),
        art("c", "f", 2010, {"GB"}, 7, 9),
    });
    const auto rows = report::summarize(c);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].year == 2009);
    CHECK(rows[0].articles == 2);
    CHECK(rows[0].citations == 14);
    CHECK(rows[0].readers == 20);
    CHECK(rows[1].year == 2010);
    CHECK(rows[2].is_total);
    CHECK(rows[2].articles == 3);
    CHECK(rows[2].citations == 21);
    CHECK(rows[2].readers == 29);
    CHECK(rows[2].citations_per_article == doctest::Approx(21.0 / 3.0));
}

TEST_CASE("empty corpus summarizes to a zero total row") {
    corpus::LinkedCorpus empty;
    const auto rows = report::summarize(empty);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].is_total);
    CHECK(rows[0].articles == 0);
    CHECK_FALSE(rows[0].per_article_defined);
    CHECK_FALSE(rows[0].per_reader_defined);
    CHECK(rows[0].citations_per_article == 0.0);

    std::ostringstream out;
    report::write_summary_csv(rows, out);
    CHECK(out.str() ==
          "year,articles,citations,readers,citations_per_article,"
          "readers_per_article,citations_per_reader\n"
          "Total,0,0,0,0.00,0.00,0.00\n");
}

TEST_CASE("summary csv layout") {
    const auto c = make_corpus({art("a", "f", 2009, {"GB"}, 10, 20)});
    std::ostringstream out;
    report::write_summary_csv(report::summarize(c), out);
    CHECK(out.str() ==
          "year,articles,citations,readers,citations_per_article,"
          "readers_per_article,citations_per_reader\n"
          "2009,1,10,20,10.00,20.00,0.50\n"
          "Total,1,10,20,10.00,20.00,0.50\n");
}

TEST_CASE("timeseries export format and cardinality") {
    const auto t = small_table();
    std::ostringstream out;
    report::export_timeseries(t, {"GB", "IT"}, out);
    const std::string csv = out.str();

    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "country,year,value,output,valid,reason");
    std::vector<std::string> rows;
    while (std::getline(lines, line)) rows.push_back(line);
    CHECK(rows.size() == 2 * 3);  // countries x years
    CHECK(rows[0] == "GB,2011,1.31,1,true,");
    CHECK(rows[4] == "IT,2012,,0,false,zero output");

    // byte-stable across repeated exports
    std::ostringstream again;
    report::export_timeseries(t, {"GB", "IT"}, again);
    CHECK(again.str() == csv);

    // a country absent from the table still yields rows, flagged invalid
    std::ostringstream with_missing;
    report::export_timeseries(t, {"GB", "IT", "ZZ"}, with_missing);
    std::istringstream relines(with_missing.str());
    std::size_t n = 0;
    while (std::getline(relines, line)) ++n;
    CHECK(n == 1 + 3 * 3);
}

TEST_CASE("timeseries csv round-trips") {
    const auto t = small_table();
    std::ostringstream out;
    report::export_timeseries(t, {"GB", "IT"}, out);
    std::istringstream in(out.str());
    const auto reread = report::read_timeseries_csv(in, t.metric);
    for (const auto& [key, cell] : t.cells) {
        const auto* rc = reread.find(key.first, key.second);
        REQUIRE(rc);
        CHECK(rc->valid == cell.valid);
        if (cell.valid) CHECK(rc->value == cell.value);  // shortest form is exact
        CHECK(rc->reason == cell.reason);
    }

    std::istringstream bad("wrong,header\n");
    CHECK_THROWS_AS(report::read_timeseries_csv(bad, t.metric), UserError);
}

TEST_CASE("chart draws one polyline per country and breaks at invalid cells") {
    const auto t = small_table();
    std::ostringstream out;
    report::render_chart(t, {"GB", "IT"}, out, "test chart");
    const std::string svg = out.str();

    std::size_t polylines = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        pos += 1;
    }
    // GB: one 3-year run; IT: 2011 and 2013 are singleton runs (drawn as dots)
    CHECK(polylines == 1);
    std::size_t circles = 0;
    pos = 0;
    while ((pos = svg.find("<circle", pos)) != std::string::npos) {
        ++circles;
        pos += 1;
    }
    CHECK(circles == 2);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);  // reference at 1.0
    CHECK(svg.find("test chart") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);

    // deterministic output
    std::ostringstream again;
    report::render_chart(t, {"GB", "IT"}, again, "test chart");
    CHECK(again.str() == svg);
}

TEST_CASE("a full-length invalid-free table gets an unbroken line per country") {
    indicators::IndicatorTable t;
    t.metric = indicators::Indicator::afynrc;
    for (const std::string country : {"A1", "B2", "C3"}) {
        for (int year = 2009; year <= 2015; ++year) {
            indicators::IndicatorCell cell;
            cell.value = 1.0;
            cell.output = 1.0;
            cell.valid = true;
            t.cells.emplace(indicators::CountryYear{country, year}, cell);
        }
    }
    std::ostringstream out;
    report::render_chart(t, {"A1", "B2", "C3"}, out);
    const std::string svg = out.str();
    std::size_t polylines = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        pos += 1;
    }
    CHECK(polylines == 3);
}

TEST_CASE("an invalid middle year splits the line in two") {
    indicators::IndicatorTable t;
    t.metric = indicators::Indicator::afynrc;
    for (int year = 2009; year <= 2015; ++year) {
        indicators::IndicatorCell cell;
        if (year == 2012) {
            cell.valid = false;
            cell.reason = indicators::kReasonZeroOutput;
        } else {
            cell.valid = true;
            cell.value = 1.2;
            cell.output = 1.0;
        }
        t.cells.emplace(indicators::CountryYear{"GB", year}, cell);
    }
    std::ostringstream out;
    report::render_chart(t, {"GB"}, out);
    const std::string svg = out.str();
    std::size_t polylines = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        pos += 1;
    }
    CHECK(polylines == 2);
}

TEST_CASE("chart with no valid cells is an error") {
    indicators::IndicatorTable t;
    t.metric = indicators::Indicator::afyncc;
    indicators::IndicatorCell cell;
    cell.valid = false;
    cell.reason = indicators::kReasonZeroOutput;
    t.cells.emplace(indicators::CountryYear{"GB", 2011}, cell);
    std::ostringstream out;
    CHECK_THROWS_AS(report::render_chart(t, {"GB"}, out), UserError);
}

TEST_CASE("NA is suppressed from default country lists") {
    indicators::IndicatorTable t;
    indicators::IndicatorCell cell;
    cell.valid = true;
    cell.value = 1.0;
    t.cells.emplace(indicators::CountryYear{"GB", 2011}, cell);
    t.cells.emplace(indicators::CountryYear{"NA", 2011}, cell);
    CHECK(report::default_countries(t, false) == std::vector<std::string>{"GB"});
    CHECK(report::default_countries(t, true) ==
          std::vector<std::string>{"GB", "NA"});
}
