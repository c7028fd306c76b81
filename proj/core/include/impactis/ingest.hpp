#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "impactis/corpus.hpp"
#include "impactis/ingest_report.hpp"

namespace impactis::ingest {

enum class Format { jsonl, csv };

/// "jsonl" or "csv"; anything else throws UserError.
Format format_from_name(std::string_view name);

/// Matching key for article <-> readership linkage.
struct MatchKey {
    std::string normalized_title;
    int year = 0;
    std::string first_author_surname;
    std::string doi;  // normalized; empty = none

    bool operator==(const MatchKey&) const = default;
};

MatchKey key_of(const corpus::ArticleRecord& article);
MatchKey key_of(const corpus::ReadershipRecord& record);

struct ParsedArticles {
    std::vector<corpus::ArticleRecord> records;
    std::uint64_t read = 0;      // record attempts, including rejected
    std::uint64_t rejected = 0;  // malformed, invalid, or filtered
    std::vector<std::string> warnings;
};

struct ParsedReaderships {
    std::vector<corpus::ReadershipRecord> records;
    std::uint64_t read = 0;
    std::uint64_t rejected = 0;
    std::vector<std::string> warnings;
};

/// Malformed or invalid lines are counted and skipped, never fatal.
/// Country codes are uppercased; unknown codes pass through with a
/// warning. Articles whose doc_type is not the accepted one, or whose
/// year falls outside the configured range, are rejected and counted.
/// Throws UserError only when the stream itself is unusable (e.g. a CSV
/// header is missing required columns).
ParsedArticles parse_articles(std::istream& in, Format format,
                              const corpus::ValidationOptions& opts);
ParsedReaderships parse_readerships(std::istream& in, Format format);

/// DOI equality is authoritative; otherwise the (normalized title, year,
/// first-author surname) triple must match uniquely. A readership whose
/// DOI conflicts with the candidate's is discarded; a title+surname match
/// with the wrong year is discarded; an ambiguous key is left unmatched.
/// Readers of all accepted matches are summed per article.
/// `parse_counts` carries the read/rejected totals from parsing into the
/// corpus provenance; link fills the matching counters itself.
/// Throws UserError listing the ids when article ids collide.
corpus::LinkedCorpus link(const std::vector<corpus::ArticleRecord>& articles,
                          const std::vector<corpus::ReadershipRecord>& readerships,
                          IngestReport parse_counts = {});

/// Canonical linked-corpus JSONL: one object per line, alphabetical keys,
/// LF endings. Byte-stable for a given corpus.
void write_corpus_jsonl(const corpus::LinkedCorpus& corpus, std::ostream& out);

/// Strict reader for the canonical format; throws UserError on any
/// malformed line or duplicate id.
corpus::LinkedCorpus read_corpus_jsonl(std::istream& in);

void write_report_json(const IngestReport& report, std::ostream& out);

}  // namespace impactis::ingest
