#include "impactis/corpus.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#include "impactis/errors.hpp"

namespace impactis::corpus {

namespace {

// ISO-3166 alpha-2 assigned codes plus the user-assigned XK.
constexpr std::array<std::string_view, 250> kIsoAlpha2 = {
    "AD", "AE", "AF", "AG", "AI", "AL", "AM", "AO", "AQ", "AR", "AS", "AT",
    "AU", "AW", "AX", "AZ", "BA", "BB", "BD", "BE", "BF", "BG", "BH", "BI",
    "BJ", "BL", "BM", "BN", "BO", "BQ", "BR", "BS", "BT", "BV", "BW", "BY",
    "BZ", "CA", "CC", "CD", "CF", "CG", "CH", "CI", "CK", "CL", "CM", "CN",
    "CO", "CR", "CU", "CV", "CW", "CX", "CY", "CZ", "DE", "DJ", "DK", "DM",
    "DO", "DZ", "EC", "EE", "EG", "EH", "ER", "ES", "ET", "FI", "FJ", "FK",
    "FM", "FO", "FR", "GA", "GB", "GD", "GE", "GF", "GG", "GH", "GI", "GL",
    "GM", "GN", "GP", "GQ", "GR", "GS", "GT", "GU", "GW", "GY", "HK", "HM",
    "HN", "HR", "HT", "HU", "ID", "IE", "IL", "IM", "IN", "IO", "IQ", "IR",
    "IS", "IT", "JE", "JM", "JO", "JP", "KE", "KG", "KH", "KI", "KM", "KN",
    "KP", "KR", "KW", "KY", "KZ", "LA", "LB", "LC", "LI", "LK", "LR", "LS",
    "LT", "LU", "LV", "LY", "MA", "MC", "MD", "ME", "MF", "MG", "MH", "MK",
    "ML", "MM", "MN", "MO", "MP", "MQ", "MR", "MS", "MT", "MU", "MV", "MW",
    "MX", "MY", "MZ", "NA", "NC", "NE", "NF", "NG", "NI", "NL", "NO", "NP",
    "NR", "NU", "NZ", "OM", "PA", "PE", "PF", "PG", "PH", "PK", "PL", "PM",
    "PN", "PR", "PS", "PT", "PW", "PY", "QA", "RE", "RO", "RS", "RU", "RW",
    "SA", "SB", "SC", "SD", "SE", "SG", "SH", "SI", "SJ", "SK", "SL", "SM",
    "SN", "SO", "SR", "SS", "ST", "SV", "SX", "SY", "SZ", "TC", "TD", "TF",
    "TG", "TH", "TJ", "TK", "TL", "TM", "TN", "TO", "TR", "TT", "TV", "TW",
    "TZ", "UA", "UG", "UM", "US", "UY", "UZ", "VA", "VC", "VE", "VG", "VI",
    "VN", "VU", "WF", "WS", "XK", "YE", "YT", "ZA", "ZM", "ZW"};

}  // namespace

bool is_known_country(std::string_view code) {
    return std::binary_search(kIsoAlpha2.begin(), kIsoAlpha2.end(), code);
}

LinkedCorpus LinkedCorpus::from_articles(std::vector<LinkedArticle> articles,
                                         ingest::IngestReport provenance) {
    std::set<std::string_view> seen;
    std::set<std::string> duplicates;
    for (const auto& a : articles) {
        if (!seen.insert(a.article.id).second) duplicates.insert(a.article.id);
    }
    if (!duplicates.empty()) {
        std::ostringstream msg;
        msg << "duplicate article ids:";
        for (const auto& id : duplicates) msg << ' ' << id;
        throw UserError(msg.str());
    }
    LinkedCorpus corpus;
    corpus.articles_ = std::move(articles);
    corpus.provenance_ = provenance;
    return corpus;
}

std::vector<int> LinkedCorpus::years() const {
    std::set<int> ys;
    for (const auto& a : articles_) ys.insert(a.article.year);
    return {ys.begin(), ys.end()};
}

std::vector<std::string> LinkedCorpus::author_countries() const {
    std::set<std::string> cs;
    for (const auto& a : articles_)
        for (const auto& au : a.article.authors) cs.insert(au.country);
    return {cs.begin(), cs.end()};
}

std::map<std::string, double> fractional_shares(const ArticleRecord& article) {
    if (article.authors.empty()) {
        throw ValidationError("article '" + article.id + "' has an empty author list");
    }
    const double per_author = 1.0 / static_cast<double>(article.authors.size());
    std::map<std::string, double> counts;
    for (const auto& au : article.authors) {
        counts[au.country.empty() ? std::string(kNoCountry) : au.country] += 1.0;
    }
    std::map<std::string, double> shares;
    for (const auto& [country, n] : counts) shares[country] = n * per_author;
    return shares;
}

std::vector<std::string> validate(const ArticleRecord& article,
                                  const ValidationOptions& opts) {
    std::vector<std::string> violations;
    if (article.authors.empty()) violations.push_back("authors must be non-empty");
    if (article.citations < 0) violations.push_back("citations must be >= 0");
    if (article.year < opts.min_year || article.year > opts.max_year) {
        std::ostringstream msg;
        msg << "year " << article.year << " outside configured range ["
            << opts.min_year << ", " << opts.max_year << "]";
        violations.push_back(msg.str());
    }
    return violations;
}

std::vector<std::string> validate(const ReadershipRecord& record) {
    std::vector<std::string> violations;
    if (record.reader_count < 0) violations.push_back("reader_count must be >= 0");
    std::int64_t declared = 0;
    for (const auto& [country, n] : record.reader_countries) {
        if (n < 0) {
            violations.push_back("reader_countries['" + country + "'] must be >= 0");
        } else {
            declared += n;
        }
    }
    if (record.reader_count >= 0 && declared > record.reader_count) {
        std::ostringstream msg;
        msg << "declared reader sum " << declared << " exceeds reader_count "
            << record.reader_count;
        violations.push_back(msg.str());
    }
    return violations;
}

}  // namespace impactis::corpus
