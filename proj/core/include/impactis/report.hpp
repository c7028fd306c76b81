#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "impactis/corpus.hpp"
#include "impactis/indicators.hpp"

namespace impactis::report {

struct SummaryRow {
    int year = 0;
    bool is_total = false;
    std::uint64_t articles = 0;
    std::int64_t citations = 0;
    std::int64_t readers = 0;
    double citations_per_article = 0.0;
    double readers_per_article = 0.0;
    double citations_per_reader = 0.0;
    bool per_article_defined = false;  // articles > 0
    bool per_reader_defined = false;   // readers > 0
};

SummaryRow make_summary_row(int year, std::uint64_t articles,
                            std::int64_t citations, std::int64_t readers);

/// One row per corpus year (ascending) plus a Total row whose counts are
/// exact integer column sums and whose ratios are recomputed from them.
/// An empty corpus yields just the zero Total row.
std::vector<SummaryRow> summarize(const corpus::LinkedCorpus& corpus);

/// Two decimals, round half to even. Undefined ratios render as 0.00.
std::string format_ratio(double value);

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out);

/// CSV with header country,year,value,output,valid,reason; rows sorted by
/// (country, year); invalid cells keep an empty value column and carry
/// their reason. Byte-stable for identical input.
void export_timeseries(const indicators::IndicatorTable& table,
                       const std::vector<std::string>& countries,
                       std::ostream& out);

/// Self-contained SVG line chart: one polyline per country run of valid
/// years (invalid cells break the line), a reference line at 1.0, and a
/// legend. Deterministic output. Throws UserError when the selection has
/// no valid cell.
void render_chart(const indicators::IndicatorTable& table,
                  const std::vector<std::string>& countries,
                  std::ostream& out, const std::string& title = "");

/// Countries of the table, sorted; "NA" suppressed unless include_na.
std::vector<std::string> default_countries(const indicators::IndicatorTable& table,
                                           bool include_na);

/// Reads a CSV produced by export_timeseries back into a table.
/// Throws UserError on malformed input.
indicators::IndicatorTable read_timeseries_csv(std::istream& in,
                                               indicators::Indicator metric);

}  // namespace impactis::report
