#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "impactis/ingest_report.hpp"

namespace impactis::corpus {

/// Pseudo-country assigned to authors with no affiliation so they stay in
/// every denominator instead of silently dropping out.
inline constexpr std::string_view kNoCountry = "NA";

struct Authorship {
    std::string name;
    std::string country = std::string(kNoCountry);  // alpha-2 code or "NA"

    bool operator==(const Authorship&) const = default;
};

/// One journal article as ingested. `doi` empty means no DOI.
struct ArticleRecord {
    std::string id;
    std::string doi;
    std::string title;
    int year = 0;
    std::string field;
    std::string doc_type;
    std::vector<Authorship> authors;
    std::int64_t citations = 0;

    bool operator==(const ArticleRecord&) const = default;
};

/// One reference-manager entry. reader_countries holds the declared
/// affiliations only; undeclared readers are the remainder up to
/// reader_count.
struct ReadershipRecord {
    std::string doi;
    std::string title;
    int year = 0;
    std::string first_author;
    std::int64_t reader_count = 0;
    std::map<std::string, std::int64_t> reader_countries;

    bool operator==(const ReadershipRecord&) const = default;
};

/// Article with its combined readership. Zero readers is data, not absence.
struct LinkedArticle {
    ArticleRecord article;
    std::int64_t readers = 0;
    std::map<std::string, std::int64_t> reader_countries;

    bool operator==(const LinkedArticle&) const = default;
};

/// Validated, deduplicated join of articles and readerships. Immutable
/// after construction; every computation downstream is a pure function
/// of it.
class LinkedCorpus {
public:
    LinkedCorpus() = default;

    /// Throws UserError listing the ids when article ids collide.
    static LinkedCorpus from_articles(std::vector<LinkedArticle> articles,
                                      ingest::IngestReport provenance = {});

    const std::vector<LinkedArticle>& articles() const { return articles_; }
    const ingest::IngestReport& provenance() const { return provenance_; }
    bool empty() const { return articles_.empty(); }

    std::vector<int> years() const;                  // sorted, unique
    std::vector<std::string> author_countries() const;  // sorted, unique

private:
    std::vector<LinkedArticle> articles_;
    ingest::IngestReport provenance_;
};

struct ValidationOptions {
    int min_year = 1000;
    int max_year = 9999;
    std::string accepted_doc_type = "article";
};

/// p(s,a): every author carries 1/n of the article, so the article's
/// credit splits across countries by head count. "NA" authors get an
/// entry like any country. Shares sum to 1 within 1e-12.
/// Throws ValidationError naming the article id when authors is empty.
std::map<std::string, double> fractional_shares(const ArticleRecord& article);

/// All violated invariants, not just the first. Empty means valid.
std::vector<std::string> validate(const ArticleRecord& article,
                                  const ValidationOptions& opts);
std::vector<std::string> validate(const ReadershipRecord& record);

/// ISO-3166 alpha-2 assigned codes (plus XK). Unknown codes are kept
/// verbatim at ingest but flagged with a warning.
bool is_known_country(std::string_view code);

}  // namespace impactis::corpus
