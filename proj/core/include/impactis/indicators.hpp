#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "impactis/corpus.hpp"

namespace impactis::indicators {

enum class Metric { citations, readers };

enum class Indicator { afyncc, afynrc, accfynrc, accfymucnrc, afymucnrc };

std::string_view indicator_name(Indicator metric);
Indicator indicator_from_name(std::string_view name);  // throws UserError

struct FieldYearKey {
    std::string field;
    int year = 0;

    auto operator<=>(const FieldYearKey&) const = default;
};

using CountryYear = std::pair<std::string, int>;

// Machine-readable reasons for invalid cells.
inline constexpr std::string_view kReasonZeroOutput = "zero output";
inline constexpr std::string_view kReasonZeroFieldYearTotal = "zero field-year total";
inline constexpr std::string_view kReasonZeroBiasFactor = "zero bias factor";
inline constexpr std::string_view kReasonNonpositiveFactor = "nonpositive correction factor";

struct IndicatorCell {
    double value = 0.0;
    double output = 0.0;  // fractional publication output backing the cell
    bool valid = false;
    std::string reason;   // empty when valid

    bool operator==(const IndicatorCell&) const = default;
};

/// country x year matrix of one indicator. Cells exist for the full cross
/// product of corpus countries (including "NA") and corpus years.
struct IndicatorTable {
    Indicator metric = Indicator::afyncc;
    std::map<CountryYear, IndicatorCell> cells;

    std::vector<int> years() const;
    std::vector<std::string> countries() const;
    const IndicatorCell* find(const std::string& country, int year) const;

    bool operator==(const IndicatorTable&) const = default;
};

/// Plain mean of the metric over every article in the field-year.
/// Throws UserError when the corpus has no such field-year.
double field_year_mean(const corpus::LinkedCorpus& corpus, Metric metric,
                       const FieldYearKey& key);

/// value / field-year mean; nullopt when the field-year total is zero
/// (the article then drops out of the averaged indicator entirely).
std::optional<double> normalize_article(const corpus::LinkedCorpus& corpus,
                                        Metric metric,
                                        const corpus::LinkedArticle& article);

/// Fractional publication output per country for one year, counting only
/// articles with a defined normalized value for the metric (so output can
/// differ between the citation and readership sides).
std::map<std::string, double> country_output(const corpus::LinkedCorpus& corpus,
                                             Metric metric, int year);

/// The averaged field-and-year normalized indicator per country and year.
/// Deterministic for any thread count: articles are reduced in fixed-size
/// chunks merged in chunk order.
/// Throws UserError on an empty corpus.
IndicatorTable country_indicator(const corpus::LinkedCorpus& corpus,
                                 Metric metric, unsigned threads = 1);

}  // namespace impactis::indicators
