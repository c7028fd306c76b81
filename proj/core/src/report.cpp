#include "impactis/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "impactis/errors.hpp"

namespace impactis::report {

namespace {

std::string format_double(double v) {
    std::array<char, 64> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string format_fixed(double v, int precision) {
    std::array<char, 64> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::fixed, precision);
    return std::string(buf.data(), res.ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    out.push_back(field);
    return out;
}

constexpr std::array<std::string_view, 12> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#4e79a7", "#f28e2b"};

// Chart geometry.
constexpr double kWidth = 960.0;
constexpr double kHeight = 540.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 190.0;
constexpr double kMarginTop = 50.0;
constexpr double kMarginBottom = 55.0;

double nice_step(double span, int target_ticks) {
    const double raw = span / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) return m * mag;
    }
    return 10.0 * mag;
}

}  // namespace

SummaryRow make_summary_row(int year, std::uint64_t articles,
                            std::int64_t citations, std::int64_t readers) {
    SummaryRow row;
    row.year = year;
    row.articles = articles;
    row.citations = citations;
    row.readers = readers;
    row.per_article_defined = articles > 0;
    row.per_reader_defined = readers > 0;
    if (row.per_article_defined) {
        row.citations_per_article =
            static_cast<double>(citations) / static_cast<double>(articles);
        row.readers_per_article =
            static_cast<double>(readers) / static_cast<double>(articles);
    }
    if (row.per_reader_defined) {
        row.citations_per_reader =
            static_cast<double>(citations) / static_cast<double>(readers);
    }
    return row;
}

std::vector<SummaryRow> summarize(const corpus::LinkedCorpus& corpus) {
    struct Tally {
        std::uint64_t articles = 0;
        std::int64_t citations = 0;
        std::int64_t readers = 0;
    };
    std::map<int, Tally> by_year;
    for (const auto& a : corpus.articles()) {
        auto& t = by_year[a.article.year];
        t.articles += 1;
        t.citations += a.article.citations;
        t.readers += a.readers;
    }
    std::vector<SummaryRow> rows;
    Tally total;
    for (const auto& [year, t] : by_year) {
        rows.push_back(make_summary_row(year, t.articles, t.citations, t.readers));
        total.articles += t.articles;
        total.citations += t.citations;
        total.readers += t.readers;
    }
    SummaryRow total_row =
        make_summary_row(0, total.articles, total.citations, total.readers);
    total_row.is_total = true;
    rows.push_back(total_row);
    return rows;
}

std::string format_ratio(double value) {
    // std::to_chars fixed output is correctly rounded against the exact
    // binary value, so decimal ties land on the even digit.
    return format_fixed(value, 2);
}

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& out) {
    out << "year,articles,citations,readers,citations_per_article,"
           "readers_per_article,citations_per_reader\n";
    for (const auto& r : rows) {
        if (r.is_total) {
            out << "Total";
        } else {
            out << r.year;
        }
        out << ',' << r.articles << ',' << r.citations << ',' << r.readers << ','
            << format_ratio(r.citations_per_article) << ','
            << format_ratio(r.readers_per_article) << ','
            << format_ratio(r.citations_per_reader) << '\n';
    }
}

void export_timeseries(const indicators::IndicatorTable& table,
                       const std::vector<std::string>& countries,
                       std::ostream& out) {
    std::vector<std::string> sorted_countries = countries;
    std::sort(sorted_countries.begin(), sorted_countries.end());
    sorted_countries.erase(
        std::unique(sorted_countries.begin(), sorted_countries.end()),
        sorted_countries.end());
    const auto years = table.years();

    out << "country,year,value,output,valid,reason\n";
    for (const auto& country : sorted_countries) {
        for (int year : years) {
            const indicators::IndicatorCell* cell = table.find(country, year);
            indicators::IndicatorCell fallback;
            if (cell == nullptr) {
                fallback.valid = false;
                fallback.reason = indicators::kReasonZeroOutput;
                cell = &fallback;
            }
            out << country << ',' << year << ',';
            if (cell->valid) out << format_double(cell->value);
            out << ',' << format_double(cell->output) << ','
                << (cell->valid ? "true" : "false") << ',' << cell->reason << '\n';
        }
    }
}

std::vector<std::string> default_countries(const indicators::IndicatorTable& table,
                                           bool include_na) {
    std::vector<std::string> out;
    for (const auto& c : table.countries()) {
        if (!include_na && c == corpus::kNoCountry) continue;
        out.push_back(c);
    }
    return out;
}

void render_chart(const indicators::IndicatorTable& table,
                  const std::vector<std::string>& countries,
                  std::ostream& out, const std::string& title) {
    const auto years = table.years();
    double max_value = 0.0;
    bool any_valid = false;
    for (const auto& country : countries) {
        for (int year : years) {
            const auto* cell = table.find(country, year);
            if (cell != nullptr && cell->valid) {
                any_valid = true;
                max_value = std::max(max_value, cell->value);
            }
        }
    }
    if (!any_valid) throw UserError("no valid cells to chart");

    const int year_min = years.front();
    const int year_max = years.back();
    const double x0 = kMarginLeft;
    const double x1 = kWidth - kMarginRight;
    const double y0 = kHeight - kMarginBottom;
    const double y1 = kMarginTop;
    const double y_top = std::max(1.0, max_value) * 1.08;
    const double x_span = year_max > year_min ? double(year_max - year_min) : 1.0;

    const auto x_of = [&](int year) {
        return x0 + (x1 - x0) * (double(year - year_min) / x_span);
    };
    const auto y_of = [&](double v) { return y0 - (y0 - y1) * (v / y_top); };
    const auto fmt = [](double v) { return format_fixed(v, 2); };

    const std::string chart_title =
        title.empty() ? std::string(indicators::indicator_name(table.metric))
                      : title;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
        << kHeight << "\">\n";
    out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << fmt((x0 + x1) / 2.0)
        << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"18\">"
        << chart_title << "</text>\n";

    // axes
    out << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\""
        << fmt(x1) << "\" y2=\"" << fmt(y0)
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\""
        << fmt(x0) << "\" y2=\"" << fmt(y1)
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    // y ticks
    const double step = nice_step(y_top, 6);
    for (double v = 0.0; v <= y_top + 1e-9; v += step) {
        const double y = y_of(v);
        out << "<line x1=\"" << fmt(x0 - 4) << "\" y1=\"" << fmt(y) << "\" x2=\""
            << fmt(x0) << "\" y2=\"" << fmt(y)
            << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt(x0 - 8) << "\" y=\"" << fmt(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
               "font-size=\"12\">"
            << format_fixed(v, 2) << "</text>\n";
    }

    // x ticks: at most ~14 year labels
    const int n_years = static_cast<int>(years.size());
    const int stride = n_years > 14 ? (n_years + 13) / 14 : 1;
    for (int i = 0; i < n_years; i += stride) {
        const int year = years[static_cast<std::size_t>(i)];
        const double x = x_of(year);
        out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(y0) << "\" x2=\""
            << fmt(x) << "\" y2=\"" << fmt(y0 + 4)
            << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y0 + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"12\">"
            << year << "</text>\n";
    }

    // world-average reference
    out << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y_of(1.0)) << "\" x2=\""
        << fmt(x1) << "\" y2=\"" << fmt(y_of(1.0))
        << "\" stroke=\"#999999\" stroke-width=\"1\" "
           "stroke-dasharray=\"6,4\"/>\n";

    // one polyline per run of consecutive valid years; singletons as dots
    std::size_t color_idx = 0;
    for (const auto& country : countries) {
        const std::string_view color = kPalette[color_idx % kPalette.size()];
        std::vector<std::pair<double, double>> run;
        const auto flush = [&] {
            if (run.size() >= 2) {
                out << "<polyline fill=\"none\" stroke=\"" << color
                    << "\" stroke-width=\"2\" points=\"";
                for (std::size_t i = 0; i < run.size(); ++i) {
                    if (i > 0) out << ' ';
                    out << fmt(run[i].first) << ',' << fmt(run[i].second);
                }
                out << "\"/>\n";
            } else if (run.size() == 1) {
                out << "<circle cx=\"" << fmt(run[0].first) << "\" cy=\""
                    << fmt(run[0].second) << "\" r=\"3\" fill=\"" << color
                    << "\"/>\n";
            }
            run.clear();
        };
        for (int year : years) {
            const auto* cell = table.find(country, year);
            if (cell != nullptr && cell->valid) {
                run.emplace_back(x_of(year), y_of(cell->value));
            } else {
                flush();
            }
        }
        flush();
        ++color_idx;
    }

    // legend
    color_idx = 0;
    double legend_y = kMarginTop + 10.0;
    for (const auto& country : countries) {
        const std::string_view color = kPalette[color_idx % kPalette.size()];
        out << "<line x1=\"" << fmt(x1 + 16) << "\" y1=\"" << fmt(legend_y)
            << "\" x2=\"" << fmt(x1 + 40) << "\" y2=\"" << fmt(legend_y)
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << fmt(x1 + 46) << "\" y=\"" << fmt(legend_y + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << country
            << "</text>\n";
        legend_y += 18.0;
        ++color_idx;
    }

    out << "</svg>\n";
}

indicators::IndicatorTable read_timeseries_csv(std::istream& in,
                                               indicators::Indicator metric) {
    indicators::IndicatorTable table;
    table.metric = metric;
    std::string line;
    if (!std::getline(in, line) || line != "country,year,value,output,valid,reason") {
        throw UserError("timeseries CSV must start with header "
                        "country,year,value,output,valid,reason");
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 6) {
            throw UserError("timeseries CSV line " + std::to_string(line_no) +
                            ": expected 6 fields");
        }
        indicators::IndicatorCell cell;
        int year = 0;
        const auto yr = std::from_chars(fields[1].data(),
                                        fields[1].data() + fields[1].size(), year);
        if (yr.ec != std::errc{}) {
            throw UserError("timeseries CSV line " + std::to_string(line_no) +
                            ": bad year '" + fields[1] + "'");
        }
        cell.valid = fields[4] == "true";
        if (cell.valid) {
            const auto vr = std::from_chars(
                fields[2].data(), fields[2].data() + fields[2].size(), cell.value);
            if (vr.ec != std::errc{}) {
                throw UserError("timeseries CSV line " + std::to_string(line_no) +
                                ": bad value '" + fields[2] + "'");
            }
        }
        std::from_chars(fields[3].data(), fields[3].data() + fields[3].size(),
                        cell.output);
        cell.reason = fields[5];
        table.cells.emplace(indicators::CountryYear{fields[0], year}, std::move(cell));
    }
    return table;
}

}  // namespace impactis::report
