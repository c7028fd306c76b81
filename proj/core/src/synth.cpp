#include "impactis/synth.hpp"

#include <algorithm>
#include <array>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "impactis/errors.hpp"
#include "impactis/rng.hpp"

namespace impactis::synth {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 24> kSurnames = {
    "Alvarez",  "Baker",   "Costa",   "Dietrich", "Endo",    "Fischer",
    "Garcia",   "Haraldsen", "Ito",   "Jansen",   "Kovacs",  "Larsen",
    "Moreau",   "Novak",   "Okafor",  "Pereira",  "Quinn",   "Rossi",
    "Sato",     "Tanaka",  "Umarov",  "Vargas",   "Weber",   "Zhang"};

constexpr std::array<std::string_view, 12> kInitials = {
    "A.", "B.", "C.", "D.", "E.", "F.", "J.", "K.", "L.", "M.", "R.", "S."};

double require_number(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw UserError(std::string("synth config: missing numeric '") + key + "'");
    }
    return j.at(key).get<double>();
}

}  // namespace

SynthConfig load_config(std::istream& in) {
    const json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
        throw UserError("synth config: invalid JSON");
    }
    SynthConfig cfg;
    if (!j.contains("seed") || !j.at("seed").is_number_unsigned()) {
        throw UserError("synth config: missing unsigned 'seed'");
    }
    cfg.seed = j.at("seed").get<std::uint64_t>();
    if (!j.contains("years") || !j.at("years").is_object()) {
        throw UserError("synth config: missing 'years' object with min/max");
    }
    cfg.min_year = static_cast<int>(require_number(j.at("years"), "min"));
    cfg.max_year = static_cast<int>(require_number(j.at("years"), "max"));

    if (!j.contains("fields") || !j.at("fields").is_array()) {
        throw UserError("synth config: missing 'fields' array");
    }
    for (const auto& f : j.at("fields")) {
        FieldSpec spec;
        if (!f.contains("name") || !f.at("name").is_string()) {
            throw UserError("synth config: field entry lacks 'name'");
        }
        spec.name = f.at("name").get<std::string>();
        spec.articles_per_year = static_cast<int>(require_number(f, "articles_per_year"));
        cfg.fields.push_back(std::move(spec));
    }

    if (!j.contains("countries") || !j.at("countries").is_array()) {
        throw UserError("synth config: missing 'countries' array");
    }
    for (const auto& c : j.at("countries")) {
        CountrySpec spec;
        if (!c.contains("code") || !c.at("code").is_string()) {
            throw UserError("synth config: country entry lacks 'code'");
        }
        spec.code = c.at("code").get<std::string>();
        if (c.contains("output_weight")) spec.output_weight = require_number(c, "output_weight");
        if (c.contains("impact_multiplier")) {
            spec.impact_multiplier = require_number(c, "impact_multiplier");
        }
        if (c.contains("reader_uptake")) spec.reader_uptake = require_number(c, "reader_uptake");
        if (c.contains("own_bias")) spec.own_bias = require_number(c, "own_bias");
        cfg.countries.push_back(std::move(spec));
    }

    if (j.contains("citation_dispersion")) {
        cfg.citation_dispersion = require_number(j, "citation_dispersion");
    }
    if (j.contains("reader_dispersion")) {
        cfg.reader_dispersion = require_number(j, "reader_dispersion");
    }
    if (j.contains("declared_fraction")) {
        cfg.declared_fraction = require_number(j, "declared_fraction");
    }
    if (j.contains("citation_mean")) cfg.citation_mean = require_number(j, "citation_mean");
    if (j.contains("reader_mean")) cfg.reader_mean = require_number(j, "reader_mean");
    if (j.contains("coauthors_mean")) cfg.coauthors_mean = require_number(j, "coauthors_mean");

    check(cfg);
    return cfg;
}

void check(const SynthConfig& cfg) {
    if (cfg.fields.empty()) throw UserError("synth config: no fields");
    if (cfg.countries.empty()) throw UserError("synth config: no countries");
    if (cfg.min_year > cfg.max_year) {
        throw UserError("synth config: min_year exceeds max_year");
    }
    for (const auto& f : cfg.fields) {
        if (f.articles_per_year <= 0) {
            throw UserError("synth config: field '" + f.name +
                            "' needs articles_per_year > 0");
        }
    }
    for (const auto& c : cfg.countries) {
        if (c.output_weight <= 0.0 || c.impact_multiplier <= 0.0 || c.reader_uptake <= 0.0) {
            throw UserError("synth config: country '" + c.code +
                            "' needs positive weight, impact and uptake");
        }
        if (c.own_bias < 0.0 || c.own_bias > 1.0) {
            throw UserError("synth config: country '" + c.code +
                            "' own_bias must be in [0,1]");
        }
    }
    if (cfg.citation_dispersion <= 0.0 || cfg.reader_dispersion <= 0.0) {
        throw UserError("synth config: dispersions must be positive");
    }
    if (cfg.declared_fraction < 0.0 || cfg.declared_fraction > 1.0) {
        throw UserError("synth config: declared_fraction must be in [0,1]");
    }
    if (cfg.citation_mean <= 0.0 || cfg.reader_mean <= 0.0) {
        throw UserError("synth config: means must be positive");
    }
    if (cfg.coauthors_mean < 0.0) {
        throw UserError("synth config: coauthors_mean must be >= 0");
    }
}

void generate(const SynthConfig& cfg, std::ostream& articles_out,
              std::ostream& readers_out) {
    check(cfg);
    rng::Sampler sampler(cfg.seed);

    std::vector<double> author_weights;
    std::vector<double> uptake_weights;
    author_weights.reserve(cfg.countries.size());
    uptake_weights.reserve(cfg.countries.size());
    for (const auto& c : cfg.countries) {
        author_weights.push_back(c.output_weight);
        uptake_weights.push_back(c.output_weight * c.reader_uptake);
    }
    const auto author_cdf = rng::cumulative(author_weights);
    const auto uptake_cdf = rng::cumulative(uptake_weights);

    for (std::size_t fi = 0; fi < cfg.fields.size(); ++fi) {
        const auto& field = cfg.fields[fi];
        for (int year = cfg.min_year; year <= cfg.max_year; ++year) {
            for (int seq = 0; seq < field.articles_per_year; ++seq) {
                std::ostringstream id_stream;
                id_stream << 's' << fi << '-' << year << '-' << std::setw(5)
                          << std::setfill('0') << seq;
                const std::string id = id_stream.str();
                const std::string doi = "10.9999/" + id;
                const std::string title = "Synthetic study " + id + " in " + field.name;

                const std::int64_t n_authors =
                    std::min<std::int64_t>(1 + sampler.poisson(cfg.coauthors_mean), 8);
                std::vector<std::size_t> author_country_idx;
                author_country_idx.reserve(static_cast<std::size_t>(n_authors));
                json authors = json::array();
                for (std::int64_t k = 0; k < n_authors; ++k) {
                    const std::size_t ci = sampler.pick(author_cdf);
                    author_country_idx.push_back(ci);
                    const auto name_seed = std::min<std::size_t>(
                        static_cast<std::size_t>(sampler.u01() * kSurnames.size()),
                        kSurnames.size() - 1);
                    const std::string name =
                        std::string(kInitials[name_seed % kInitials.size()]) + " " +
                        std::string(kSurnames[name_seed]);
                    authors.push_back(
                        {{"name", name}, {"country", cfg.countries[ci].code}});
                }

                double impact = 0.0;
                double reader_scale = 0.0;
                const double per_author = 1.0 / static_cast<double>(n_authors);
                for (std::size_t ci : author_country_idx) {
                    impact += per_author * cfg.countries[ci].impact_multiplier;
                    reader_scale += per_author * cfg.countries[ci].impact_multiplier *
                                    cfg.countries[ci].reader_uptake;
                }

                const std::int64_t citations = sampler.negative_binomial(
                    cfg.citation_mean * impact, cfg.citation_dispersion);
                const std::int64_t readers = sampler.negative_binomial(
                    cfg.reader_mean * reader_scale, cfg.reader_dispersion);
                const std::int64_t declared =
                    sampler.binomial(readers, cfg.declared_fraction);

                std::map<std::string, std::int64_t> reader_countries;
                for (std::int64_t k = 0; k < declared; ++k) {
                    const auto author_slot = std::min<std::size_t>(
                        static_cast<std::size_t>(sampler.u01() *
                                                 static_cast<double>(n_authors)),
                        static_cast<std::size_t>(n_authors) - 1);
                    const std::size_t author_ci = author_country_idx[author_slot];
                    std::size_t reader_ci;
                    if (sampler.u01() < cfg.countries[author_ci].own_bias) {
                        reader_ci = author_ci;
                    } else {
                        reader_ci = sampler.pick(uptake_cdf);
                    }
                    reader_countries[cfg.countries[reader_ci].code] += 1;
                }

                json article;
                article["id"] = id;
                article["doi"] = doi;
                article["title"] = title;
                article["year"] = year;
                article["field"] = field.name;
                article["doc_type"] = "article";
                article["authors"] = authors;
                article["citations"] = citations;
                articles_out << article.dump() << '\n';

                json readership;
                readership["doi"] = doi;
                readership["title"] = title;
                readership["year"] = year;
                readership["first_author"] = authors.front().at("name");
                readership["reader_count"] = readers;
                readership["reader_countries"] = reader_countries;
                readers_out << readership.dump() << '\n';
            }
        }
    }
}

}  // namespace impactis::synth
