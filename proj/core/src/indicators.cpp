#include "impactis/indicators.hpp"

#include <atomic>
#include <cstdint>
#include <set>
#include <sstream>
#include <thread>

#include "impactis/accum.hpp"
#include "impactis/errors.hpp"

namespace impactis::indicators {

namespace {

// Fixed chunk size for the parallel reduction. Partial results are keyed
// by chunk index and merged sequentially, so the outcome is bit-identical
// for every thread count.
constexpr std::size_t kChunk = 4096;

std::int64_t metric_value(const corpus::LinkedArticle& a, Metric metric) {
    return metric == Metric::citations ? a.article.citations : a.readers;
}

struct FieldYearTotal {
    std::int64_t sum = 0;
    std::int64_t count = 0;
};

std::map<FieldYearKey, FieldYearTotal> field_year_totals(
    const corpus::LinkedCorpus& corpus, Metric metric) {
    std::map<FieldYearKey, FieldYearTotal> totals;
    for (const auto& a : corpus.articles()) {
        auto& t = totals[{a.article.field, a.article.year}];
        t.sum += metric_value(a, metric);
        t.count += 1;
    }
    return totals;
}

struct CellSums {
    CompensatedSum weighted_normalized;  // sum of FYN * p over defined articles
    CompensatedSum output;               // sum of p over defined articles
    CompensatedSum raw_output;           // sum of p over all articles
};

// Runs fn(chunk_index, begin, end) for every fixed-size chunk, possibly on
// several threads, then consume(chunk_index) sequentially in index order.
template <typename ChunkFn, typename ConsumeFn>
void chunked_for(std::size_t n, unsigned threads, ChunkFn fn, ConsumeFn consume) {
    const std::size_t chunks = n == 0 ? 0 : (n - 1) / kChunk + 1;
    if (threads <= 1 || chunks <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) {
            fn(c, c * kChunk, std::min(n, (c + 1) * kChunk));
            consume(c);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks) return;
            fn(c, c * kChunk, std::min(n, (c + 1) * kChunk));
        }
    };
    std::vector<std::thread> pool;
    const unsigned n_workers = std::min<unsigned>(threads, static_cast<unsigned>(chunks));
    pool.reserve(n_workers);
    for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    for (std::size_t c = 0; c < chunks; ++c) consume(c);
}

}  // namespace

std::string_view indicator_name(Indicator metric) {
    switch (metric) {
        case Indicator::afyncc: return "afyncc";
        case Indicator::afynrc: return "afynrc";
        case Indicator::accfynrc: return "accfynrc";
        case Indicator::accfymucnrc: return "accfymucnrc";
        case Indicator::afymucnrc: return "afymucnrc";
    }
    return "afyncc";
}

Indicator indicator_from_name(std::string_view name) {
    if (name == "afyncc") return Indicator::afyncc;
    if (name == "afynrc") return Indicator::afynrc;
    if (name == "accfynrc") return Indicator::accfynrc;
    if (name == "accfymucnrc") return Indicator::accfymucnrc;
    if (name == "afymucnrc") return Indicator::afymucnrc;
    throw UserError("unknown metric '" + std::string(name) +
                    "' (expected afyncc, afynrc, accfynrc, accfymucnrc or afymucnrc)");
}

std::vector<int> IndicatorTable::years() const {
    std::set<int> ys;
    for (const auto& [key, cell] : cells) ys.insert(key.second);
    return {ys.begin(), ys.end()};
}

std::vector<std::string> IndicatorTable::countries() const {
    std::set<std::string> cs;
    for (const auto& [key, cell] : cells) cs.insert(key.first);
    return {cs.begin(), cs.end()};
}

const IndicatorCell* IndicatorTable::find(const std::string& country, int year) const {
    const auto it = cells.find({country, year});
    return it == cells.end() ? nullptr : &it->second;
}

double field_year_mean(const corpus::LinkedCorpus& corpus, Metric metric,
                       const FieldYearKey& key) {
    std::int64_t sum = 0;
    std::int64_t count = 0;
    for (const auto& a : corpus.articles()) {
        if (a.article.field == key.field && a.article.year == key.year) {
            sum += metric_value(a, metric);
            count += 1;
        }
    }
    if (count == 0) {
        std::ostringstream msg;
        msg << "no articles in field-year (" << key.field << ", " << key.year << ")";
        throw UserError(msg.str());
    }
    return static_cast<double>(sum) / static_cast<double>(count);
}

std::optional<double> normalize_article(const corpus::LinkedCorpus& corpus,
                                        Metric metric,
                                        const corpus::LinkedArticle& article) {
    const double mean =
        field_year_mean(corpus, metric, {article.article.field, article.article.year});
    if (mean == 0.0) return std::nullopt;
    return static_cast<double>(metric_value(article, metric)) / mean;
}

std::map<std::string, double> country_output(const corpus::LinkedCorpus& corpus,
                                             Metric metric, int year) {
    const auto totals = field_year_totals(corpus, metric);
    std::map<std::string, CompensatedSum> sums;
    for (const auto& a : corpus.articles()) {
        if (a.article.year != year) continue;
        if (totals.at({a.article.field, a.article.year}).sum == 0) continue;
        for (const auto& [country, p] : corpus::fractional_shares(a.article)) {
            sums[country].add(p);
        }
    }
    std::map<std::string, double> out;
    for (const auto& [country, s] : sums) out[country] = s.value();
    return out;
}

IndicatorTable country_indicator(const corpus::LinkedCorpus& corpus, Metric metric,
                                 unsigned threads) {
    if (corpus.empty()) throw UserError("cannot compute indicators on an empty corpus");

    const auto totals = field_year_totals(corpus, metric);
    const auto& articles = corpus.articles();

    using Partial = std::map<CountryYear, CellSums>;
    const std::size_t chunks =
        articles.empty() ? 0 : (articles.size() - 1) / kChunk + 1;
    std::vector<Partial> partials(chunks);

    std::map<CountryYear, CellSums> merged;
    chunked_for(
        articles.size(), threads,
        [&](std::size_t c, std::size_t begin, std::size_t end) {
            Partial& local = partials[c];
            for (std::size_t i = begin; i < end; ++i) {
                const auto& a = articles[i];
                const auto& total = totals.at({a.article.field, a.article.year});
                const bool defined = total.sum != 0;
                const double normalized =
                    defined ? static_cast<double>(metric_value(a, metric)) *
                                  static_cast<double>(total.count) /
                                  static_cast<double>(total.sum)
                            : 0.0;
                for (const auto& [country, p] : corpus::fractional_shares(a.article)) {
                    auto& cell = local[{country, a.article.year}];
                    cell.raw_output.add(p);
                    if (defined) {
                        cell.output.add(p);
                        cell.weighted_normalized.add(normalized * p);
                    }
                }
            }
        },
        [&](std::size_t c) {
            for (const auto& [key, sums] : partials[c]) {
                auto& cell = merged[key];
                cell.weighted_normalized.add(sums.weighted_normalized.value());
                cell.output.add(sums.output.value());
                cell.raw_output.add(sums.raw_output.value());
            }
            partials[c] = Partial{};
        });

    IndicatorTable table;
    table.metric = metric == Metric::citations ? Indicator::afyncc : Indicator::afynrc;

    const auto years = corpus.years();
    const auto countries = corpus.author_countries();
    for (const auto& country : countries) {
        for (int year : years) {
            IndicatorCell cell;
            const auto it = merged.find({country, year});
            const double raw = it == merged.end() ? 0.0 : it->second.raw_output.value();
            const double out = it == merged.end() ? 0.0 : it->second.output.value();
            if (raw <= 0.0) {
                cell.valid = false;
                cell.reason = kReasonZeroOutput;
            } else if (out <= 0.0) {
                // The country published that year, but only in field-years
                // whose metric total is zero.
                cell.valid = false;
                cell.reason = kReasonZeroFieldYearTotal;
            } else {
                cell.valid = true;
                cell.output = out;
                cell.value = it->second.weighted_normalized.value() / out;
            }
            table.cells.emplace(CountryYear{country, year}, std::move(cell));
        }
    }
    return table;
}

}  // namespace impactis::indicators
