#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "impactis/corpus.hpp"
#include "impactis/indicators.hpp"

namespace impactis::corrections {

/// Per-country readership bias factors calibrated on a base period.
/// b > 1 means readership overestimates citation impact for the country.
struct BiasFactors {
    std::map<std::string, double> b;      // correctable countries only, b > 0
    std::set<std::string> uncorrectable;  // pooled base indicator was zero
};

/// Reader-country statistics: where declared readers come from, how each
/// country's share moved against the base period, and how strongly each
/// country over-reads its own articles.
struct ReaderCountryStats {
    std::set<int> base_years;
    std::map<indicators::CountryYear, double> share;       // of declared readers
    std::map<indicators::CountryYear, double> incr;        // share change vs base
    std::map<indicators::CountryYear, double> self_bias;   // max(0, same - rest)
    std::map<indicators::CountryYear, double> same_country;
    std::map<indicators::CountryYear, double> rest_of_world;
    std::set<int> years_without_declared;
    std::vector<std::string> warnings;  // e.g. negative self-bias clamps
};

/// Everything needed to audit a correction run, exportable as JSON.
struct BiasProfile {
    std::set<int> base_years;
    BiasFactors factors;
    ReaderCountryStats stats;
};

/// b_s = pooled base-period readership indicator / pooled base-period
/// citation indicator, each pooled output-weighted across the base years.
/// Countries whose pooled citation or readership indicator is zero (or
/// that have no valid base cells) land in `uncorrectable`.
BiasFactors bias_factor(const indicators::IndicatorTable& reader_table,
                        const indicators::IndicatorTable& citation_table,
                        const std::set<int>& base_years);

/// Cell-wise reader_table / b_s. Countries without a bias factor are
/// marked invalid with reason "zero bias factor". By construction the
/// pooled base-period result equals the pooled base-period citation
/// indicator for every correctable country.
indicators::IndicatorTable citation_corrected(
    const indicators::IndicatorTable& reader_table, const BiasFactors& factors);

/// share, incr, self_bias (and their same/rest components) from the
/// declared reader countries. Undeclared readers are excluded here but
/// still count in the plain readership indicator.
/// Throws UserError when the corpus has no declared reader country at all.
ReaderCountryStats reader_country_stats(const corpus::LinkedCorpus& corpus,
                                        const std::set<int>& base_years);

/// Cell-wise acc / (1 + incr * self). Missing incr or self entries mean
/// no measurable correction and leave the cell unchanged; base years have
/// incr = 0 by construction. A nonpositive factor (impossible for inputs
/// in range) invalidates the cell defensively.
indicators::IndicatorTable uptake_change_corrected(
    const indicators::IndicatorTable& acc_table,
    const std::map<indicators::CountryYear, double>& incr,
    const std::map<indicators::CountryYear, double>& self_bias);

/// Cell-wise reader_table / (1 + share * self). The divisor is >= 1, so
/// no corrected value exceeds the uncorrected one.
indicators::IndicatorTable direct_uptake_corrected(
    const indicators::IndicatorTable& reader_table,
    const std::map<indicators::CountryYear, double>& share,
    const std::map<indicators::CountryYear, double>& self_bias);

void write_bias_profile_json(const BiasProfile& profile, std::ostream& out);

}  // namespace impactis::corrections
