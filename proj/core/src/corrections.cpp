#include "impactis/corrections.hpp"

#include <ostream>
#include <sstream>

#include <json.hpp>

#include "impactis/accum.hpp"
#include "impactis/errors.hpp"

namespace impactis::corrections {

namespace {

using indicators::CountryYear;
using indicators::IndicatorCell;
using indicators::IndicatorTable;

double lookup_or_zero(const std::map<CountryYear, double>& m, const CountryYear& key) {
    const auto it = m.find(key);
    return it == m.end() ? 0.0 : it->second;
}

struct Pooled {
    double numerator = 0.0;  // sum of value * output over valid base cells
    double output = 0.0;
};

Pooled pool_base(const IndicatorTable& table, const std::string& country,
                 const std::set<int>& base_years) {
    Pooled p;
    for (int y : base_years) {
        const IndicatorCell* cell = table.find(country, y);
        if (cell == nullptr || !cell->valid) continue;
        p.numerator += cell->value * cell->output;
        p.output += cell->output;
    }
    return p;
}

nlohmann::json country_year_map_json(const std::map<CountryYear, double>& m) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [key, v] : m) {
        out[key.first][std::to_string(key.second)] = v;
    }
    return out;
}

}  // namespace

BiasFactors bias_factor(const IndicatorTable& reader_table,
                        const IndicatorTable& citation_table,
                        const std::set<int>& base_years) {
    std::set<std::string> countries;
    for (const auto& c : reader_table.countries()) countries.insert(c);
    for (const auto& c : citation_table.countries()) countries.insert(c);

    BiasFactors factors;
    for (const auto& country : countries) {
        const Pooled readers = pool_base(reader_table, country, base_years);
        const Pooled citations = pool_base(citation_table, country, base_years);
        if (citations.output <= 0.0 || citations.numerator <= 0.0 ||
            readers.output <= 0.0 || readers.numerator <= 0.0) {
            factors.uncorrectable.insert(country);
            continue;
        }
        const double pooled_reader = readers.numerator / readers.output;
        const double pooled_citation = citations.numerator / citations.output;
        factors.b[country] = pooled_reader / pooled_citation;
    }
    return factors;
}

IndicatorTable citation_corrected(const IndicatorTable& reader_table,
                                  const BiasFactors& factors) {
    IndicatorTable out;
    out.metric = indicators::Indicator::accfynrc;
    for (const auto& [key, cell] : reader_table.cells) {
        IndicatorCell corrected = cell;
        if (cell.valid) {
            const auto it = factors.b.find(key.first);
            if (it == factors.b.end()) {
                corrected.valid = false;
                corrected.value = 0.0;
                corrected.reason = indicators::kReasonZeroBiasFactor;
            } else {
                corrected.value = cell.value / it->second;
            }
        }
        out.cells.emplace(key, std::move(corrected));
    }
    return out;
}

ReaderCountryStats reader_country_stats(const corpus::LinkedCorpus& corpus,
                                        const std::set<int>& base_years) {
    ReaderCountryStats stats;
    stats.base_years = base_years;

    // Declared readers per (reader country, article year) and per year.
    std::map<CountryYear, std::int64_t> declared_from;
    std::map<int, std::int64_t> declared_total;
    std::set<std::string> reader_countries;
    for (const auto& a : corpus.articles()) {
        for (const auto& [country, n] : a.reader_countries) {
            declared_from[{country, a.article.year}] += n;
            declared_total[a.article.year] += n;
            if (n > 0) reader_countries.insert(country);
        }
    }
    std::int64_t grand_total = 0;
    for (const auto& [year, n] : declared_total) grand_total += n;
    if (grand_total == 0) {
        throw UserError("corpus has no declared reader countries");
    }

    const auto years = corpus.years();
    for (int y : years) {
        const auto it = declared_total.find(y);
        if (it == declared_total.end() || it->second == 0) {
            stats.years_without_declared.insert(y);
        }
    }

    // share: declared readers from s among all declared readers of the year.
    for (const auto& country : reader_countries) {
        for (int y : years) {
            if (stats.years_without_declared.contains(y)) continue;
            const auto it = declared_from.find({country, y});
            const double num = it == declared_from.end()
                                   ? 0.0
                                   : static_cast<double>(it->second);
            stats.share[{country, y}] =
                num / static_cast<double>(declared_total.at(y));
        }
    }

    // Base-period share, pooled over the base years.
    std::map<std::string, double> base_share;
    {
        std::int64_t base_total = 0;
        for (int y : base_years) {
            const auto it = declared_total.find(y);
            if (it != declared_total.end()) base_total += it->second;
        }
        if (base_total > 0) {
            for (const auto& country : reader_countries) {
                std::int64_t n = 0;
                for (int y : base_years) {
                    const auto it = declared_from.find({country, y});
                    if (it != declared_from.end()) n += it->second;
                }
                base_share[country] =
                    static_cast<double>(n) / static_cast<double>(base_total);
            }
        } else {
            stats.warnings.push_back(
                "base period has no declared readers; uptake changes unavailable");
        }
    }

    // incr: signed share change against the pooled base; 0 for base years.
    for (const auto& [key, share] : stats.share) {
        if (base_years.contains(key.second)) {
            stats.incr[key] = 0.0;
            continue;
        }
        const auto it = base_share.find(key.first);
        if (it == base_share.end() || it->second <= 0.0) continue;
        if (share <= 0.0) continue;  // a -100% change has no defined factor
        stats.incr[key] = share / it->second - 1.0;
    }

    // same / rest / self, per author country and year.
    struct Flows {
        CompensatedSum same_num, same_den, rest_num;
    };
    std::map<CountryYear, Flows> flows;
    const auto author_countries = corpus.author_countries();
    for (const auto& a : corpus.articles()) {
        std::int64_t d_total = 0;
        for (const auto& [c, n] : a.reader_countries) d_total += n;
        const auto shares = corpus::fractional_shares(a.article);
        for (const auto& [country, p] : shares) {
            auto& f = flows[{country, a.article.year}];
            std::int64_t d_from = 0;
            const auto it = a.reader_countries.find(country);
            if (it != a.reader_countries.end()) d_from = it->second;
            f.same_num.add(p * static_cast<double>(d_from));
            f.same_den.add(p * static_cast<double>(d_total));
            f.rest_num.add(p * static_cast<double>(d_total - d_from));
        }
    }

    for (const auto& country : author_countries) {
        for (int y : years) {
            if (stats.years_without_declared.contains(y)) continue;
            const auto it = flows.find({country, y});
            bool have_same = false, have_rest = false;
            double same = 0.0, rest = 0.0;
            if (it != flows.end()) {
                const double same_den = it->second.same_den.value();
                if (same_den > 0.0) {
                    have_same = true;
                    same = it->second.same_num.value() / same_den;
                }
                // Non-s declared readerships in the year: total minus flows
                // from s across every article, not just s-authored ones.
                std::int64_t from_s = 0;
                const auto df = declared_from.find({country, y});
                if (df != declared_from.end()) from_s = df->second;
                const double rest_den =
                    static_cast<double>(declared_total.at(y) - from_s);
                if (rest_den > 0.0) {
                    have_rest = true;
                    rest = it->second.rest_num.value() / rest_den;
                }
            }
            if (!have_same && !have_rest) continue;
            if (have_same) stats.same_country[{country, y}] = same;
            if (have_rest) stats.rest_of_world[{country, y}] = rest;
            const double raw = (have_same ? same : 0.0) - (have_rest ? rest : 0.0);
            if (raw < 0.0) {
                std::ostringstream msg;
                msg << "self-bias for " << country << " " << y
                    << " clamped to 0 (same " << same << " < rest " << rest << ")";
                stats.warnings.push_back(msg.str());
                stats.self_bias[{country, y}] = 0.0;
            } else {
                stats.self_bias[{country, y}] = raw;
            }
        }
    }
    return stats;
}

IndicatorTable uptake_change_corrected(
    const IndicatorTable& acc_table,
    const std::map<CountryYear, double>& incr,
    const std::map<CountryYear, double>& self_bias) {
    IndicatorTable out;
    out.metric = indicators::Indicator::accfymucnrc;
    for (const auto& [key, cell] : acc_table.cells) {
        IndicatorCell corrected = cell;
        if (cell.valid) {
            const double factor =
                1.0 + lookup_or_zero(incr, key) * lookup_or_zero(self_bias, key);
            if (factor <= 0.0) {
                corrected.valid = false;
                corrected.value = 0.0;
                corrected.reason = indicators::kReasonNonpositiveFactor;
            } else {
                corrected.value = cell.value / factor;
            }
        }
        out.cells.emplace(key, std::move(corrected));
    }
    return out;
}

IndicatorTable direct_uptake_corrected(
    const IndicatorTable& reader_table,
    const std::map<CountryYear, double>& share,
    const std::map<CountryYear, double>& self_bias) {
    IndicatorTable out;
    out.metric = indicators::Indicator::afymucnrc;
    for (const auto& [key, cell] : reader_table.cells) {
        IndicatorCell corrected = cell;
        if (cell.valid) {
            const double factor =
                1.0 + lookup_or_zero(share, key) * lookup_or_zero(self_bias, key);
            corrected.value = cell.value / factor;
        }
        out.cells.emplace(key, std::move(corrected));
    }
    return out;
}

void write_bias_profile_json(const BiasProfile& profile, std::ostream& out) {
    nlohmann::json j;
    j["base_years"] = profile.base_years;
    j["b"] = profile.factors.b;
    j["uncorrectable"] = profile.factors.uncorrectable;
    j["share"] = country_year_map_json(profile.stats.share);
    j["incr"] = country_year_map_json(profile.stats.incr);
    j["self_bias"] = country_year_map_json(profile.stats.self_bias);
    j["same_country"] = country_year_map_json(profile.stats.same_country);
    j["rest_of_world"] = country_year_map_json(profile.stats.rest_of_world);
    j["years_without_declared"] = profile.stats.years_without_declared;
    j["warnings"] = profile.stats.warnings;
    out << j.dump(2) << '\n';
}

}  // namespace impactis::corrections
