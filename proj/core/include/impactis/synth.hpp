#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace impactis::synth {

struct FieldSpec {
    std::string name;
    int articles_per_year = 0;
};

struct CountrySpec {
    std::string code;
    double output_weight = 1.0;      // authorship mass
    double impact_multiplier = 1.0;  // scales citation and reader means
    double reader_uptake = 1.0;      // additionally scales reader means
    double own_bias = 0.0;           // probability a declared reader copies
                                     // the sampled author country, in [0,1]
};

struct SynthConfig {
    std::uint64_t seed = 0;
    int min_year = 0;
    int max_year = 0;
    std::vector<FieldSpec> fields;
    std::vector<CountrySpec> countries;
    double citation_dispersion = 1.0;
    double reader_dispersion = 1.0;
    double declared_fraction = 0.3;  // readers who declare a country
    double citation_mean = 10.0;     // world baseline per article
    double reader_mean = 12.0;
    double coauthors_mean = 1.2;     // mean extra authors beyond the first;
                                     // 0 forces single-country articles

    bool operator==(const SynthConfig&) const = default;
};

/// JSON config; throws UserError on missing keys or bad values.
SynthConfig load_config(std::istream& in);

/// Throws UserError on a degenerate config (no fields, countries or
/// years; nonpositive weights or dispersions; fractions out of range).
void check(const SynthConfig& config);

/// Emits the ingest file formats: articles.jsonl and readers.jsonl, one
/// readership record per article. Counts come from negative-binomial
/// draws whose means scale with the country multipliers; declared reader
/// countries get own_bias excess mass on the authoring countries.
/// Identical seed, identical bytes.
void generate(const SynthConfig& config, std::ostream& articles_out,
              std::ostream& readers_out);

}  // namespace impactis::synth
