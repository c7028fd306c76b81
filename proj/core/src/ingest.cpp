#include "impactis/ingest.hpp"

#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "csv_row.hpp"
#include "impactis/errors.hpp"
#include "impactis/text.hpp"

namespace impactis::ingest {

namespace {

using nlohmann::json;

std::string normalize_country(std::string_view raw, std::set<std::string>& unknown) {
    if (raw.empty()) return std::string(corpus::kNoCountry);
    std::string code = text::to_upper_ascii(raw);
    if (!corpus::is_known_country(code)) unknown.insert(code);
    return code;
}

void warn_unknown_countries(const std::set<std::string>& unknown,
                            std::vector<std::string>& warnings) {
    for (const auto& code : unknown) {
        warnings.push_back("unknown country code '" + code + "' kept verbatim");
    }
}

std::optional<std::int64_t> to_int64(const std::string& s) {
    std::int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

// "name:CC;name:CC" -> authors; the country is whatever follows the last
// colon of each entry ("NA" or empty means no affiliation).
std::vector<corpus::Authorship> parse_authors_cell(const std::string& cell,
                                                   std::set<std::string>& unknown) {
    std::vector<corpus::Authorship> authors;
    std::stringstream ss(cell);
    std::string entry;
    while (std::getline(ss, entry, ';')) {
        if (entry.empty()) continue;
        corpus::Authorship a;
        const auto colon = entry.rfind(':');
        if (colon == std::string::npos) {
            a.name = entry;
        } else {
            a.name = entry.substr(0, colon);
            const std::string country = entry.substr(colon + 1);
            a.country = country.empty() ? std::string(corpus::kNoCountry)
                                        : normalize_country(country, unknown);
        }
        authors.push_back(std::move(a));
    }
    return authors;
}

// "IT:3;US:2" -> declared reader map. Returns nullopt on malformed pairs.
std::optional<std::map<std::string, std::int64_t>> parse_reader_countries_cell(
    const std::string& cell, std::set<std::string>& unknown) {
    std::map<std::string, std::int64_t> out;
    std::stringstream ss(cell);
    std::string entry;
    while (std::getline(ss, entry, ';')) {
        if (entry.empty()) continue;
        const auto colon = entry.rfind(':');
        if (colon == std::string::npos) return std::nullopt;
        const auto n = to_int64(entry.substr(colon + 1));
        if (!n) return std::nullopt;
        out[normalize_country(entry.substr(0, colon), unknown)] += *n;
    }
    return out;
}

struct HeaderIndex {
    std::unordered_map<std::string, std::size_t> by_name;

    std::optional<std::size_t> find(const std::string& name) const {
        const auto it = by_name.find(name);
        if (it == by_name.end()) return std::nullopt;
        return it->second;
    }
};

HeaderIndex require_header(std::istream& in, const std::vector<std::string>& required,
                           const char* what) {
    auto row = detail::read_csv_row(in);
    if (!row) throw UserError(std::string(what) + ": missing CSV header row");
    HeaderIndex idx;
    for (std::size_t i = 0; i < row->size(); ++i) idx.by_name[(*row)[i]] = i;
    for (const auto& name : required) {
        if (!idx.find(name)) {
            throw UserError(std::string(what) + ": CSV header lacks column '" + name + "'");
        }
    }
    return idx;
}

std::string cell(const std::vector<std::string>& row, std::optional<std::size_t> i) {
    if (!i || *i >= row.size()) return {};
    return row[*i];
}

// --- JSONL record builders; nullopt = malformed -------------------------

std::optional<corpus::ArticleRecord> article_from_json(const json& j,
                                                       std::set<std::string>& unknown) {
    if (!j.is_object()) return std::nullopt;
    if (!j.contains("id") || !j.at("id").is_string()) return std::nullopt;
    if (!j.contains("title") || !j.at("title").is_string()) return std::nullopt;
    if (!j.contains("year") || !j.at("year").is_number_integer()) return std::nullopt;
    if (!j.contains("field") || !j.at("field").is_string()) return std::nullopt;
    if (!j.contains("doc_type") || !j.at("doc_type").is_string()) return std::nullopt;
    if (!j.contains("authors") || !j.at("authors").is_array()) return std::nullopt;
    if (!j.contains("citations") || !j.at("citations").is_number_integer()) return std::nullopt;

    corpus::ArticleRecord a;
    a.id = j.at("id").get<std::string>();
    a.title = j.at("title").get<std::string>();
    a.year = j.at("year").get<int>();
    a.field = j.at("field").get<std::string>();
    a.doc_type = j.at("doc_type").get<std::string>();
    a.citations = j.at("citations").get<std::int64_t>();
    if (j.contains("doi") && j.at("doi").is_string()) a.doi = j.at("doi").get<std::string>();
    for (const auto& ja : j.at("authors")) {
        if (!ja.is_object() || !ja.contains("name") || !ja.at("name").is_string()) {
            return std::nullopt;
        }
        corpus::Authorship au;
        au.name = ja.at("name").get<std::string>();
        if (ja.contains("country") && ja.at("country").is_string()) {
            au.country = normalize_country(ja.at("country").get<std::string>(), unknown);
        }
        a.authors.push_back(std::move(au));
    }
    return a;
}

std::optional<corpus::ReadershipRecord> readership_from_json(
    const json& j, std::set<std::string>& unknown) {
    if (!j.is_object()) return std::nullopt;
    if (!j.contains("title") || !j.at("title").is_string()) return std::nullopt;
    if (!j.contains("year") || !j.at("year").is_number_integer()) return std::nullopt;
    if (!j.contains("first_author") || !j.at("first_author").is_string()) return std::nullopt;
    if (!j.contains("reader_count") || !j.at("reader_count").is_number_integer()) {
        return std::nullopt;
    }
    corpus::ReadershipRecord r;
    r.title = j.at("title").get<std::string>();
    r.year = j.at("year").get<int>();
    r.first_author = j.at("first_author").get<std::string>();
    r.reader_count = j.at("reader_count").get<std::int64_t>();
    if (j.contains("doi") && j.at("doi").is_string()) r.doi = j.at("doi").get<std::string>();
    if (j.contains("reader_countries")) {
        if (!j.at("reader_countries").is_object()) return std::nullopt;
        for (const auto& [code, n] : j.at("reader_countries").items()) {
            if (!n.is_number_integer()) return std::nullopt;
            r.reader_countries[normalize_country(code, unknown)] += n.get<std::int64_t>();
        }
    }
    return r;
}

}  // namespace

Format format_from_name(std::string_view name) {
    if (name == "jsonl") return Format::jsonl;
    if (name == "csv") return Format::csv;
    throw UserError("unknown format '" + std::string(name) + "' (expected jsonl or csv)");
}

MatchKey key_of(const corpus::ArticleRecord& article) {
    MatchKey key;
    key.normalized_title = text::normalize_title(article.title);
    key.year = article.year;
    if (!article.authors.empty()) {
        key.first_author_surname = text::surname_of(article.authors.front().name);
    }
    key.doi = text::normalize_doi(article.doi);
    return key;
}

MatchKey key_of(const corpus::ReadershipRecord& record) {
    MatchKey key;
    key.normalized_title = text::normalize_title(record.title);
    key.year = record.year;
    key.first_author_surname = text::surname_of(record.first_author);
    key.doi = text::normalize_doi(record.doi);
    return key;
}

ParsedArticles parse_articles(std::istream& in, Format format,
                              const corpus::ValidationOptions& opts) {
    ParsedArticles result;
    std::set<std::string> unknown;

    const auto consume = [&](std::optional<corpus::ArticleRecord> record,
                             const std::string& where) {
        result.read += 1;
        if (!record) {
            result.rejected += 1;
            result.warnings.push_back(where + ": malformed article record skipped");
            return;
        }
        if (record->doc_type != opts.accepted_doc_type) {
            result.rejected += 1;
            result.warnings.push_back(where + ": doc_type '" + record->doc_type +
                                      "' filtered (accepting '" +
                                      opts.accepted_doc_type + "')");
            return;
        }
        const auto violations = corpus::validate(*record, opts);
        if (!violations.empty()) {
            result.rejected += 1;
            std::string msg = where + ": article '" + record->id + "' rejected:";
            for (const auto& v : violations) msg += " " + v + ";";
            msg.pop_back();
            result.warnings.push_back(msg);
            return;
        }
        result.records.push_back(std::move(*record));
    };

    if (format == Format::jsonl) {
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            const json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
            const std::string where = "articles line " + std::to_string(line_no);
            if (j.is_discarded()) {
                result.read += 1;
                result.rejected += 1;
                result.warnings.push_back(where + ": invalid JSON skipped");
                continue;
            }
            consume(article_from_json(j, unknown), where);
        }
    } else {
        const HeaderIndex idx = require_header(
            in,
            {"id", "doi", "title", "year", "field", "doc_type", "authors", "citations"},
            "articles");
        std::size_t line_no = 1;
        while (auto row = detail::read_csv_row(in)) {
            ++line_no;
            if (row->size() == 1 && (*row)[0].empty()) continue;  // blank line
            const std::string where = "articles line " + std::to_string(line_no);
            corpus::ArticleRecord a;
            a.id = cell(*row, idx.find("id"));
            a.doi = cell(*row, idx.find("doi"));
            a.title = cell(*row, idx.find("title"));
            a.field = cell(*row, idx.find("field"));
            a.doc_type = cell(*row, idx.find("doc_type"));
            const auto year = to_int64(cell(*row, idx.find("year")));
            const auto citations = to_int64(cell(*row, idx.find("citations")));
            if (!year || !citations || a.id.empty()) {
                consume(std::nullopt, where);
                continue;
            }
            a.year = static_cast<int>(*year);
            a.citations = *citations;
            a.authors = parse_authors_cell(cell(*row, idx.find("authors")), unknown);
            consume(std::move(a), where);
        }
    }
    if (in.bad()) throw UserError("articles: stream error while reading");
    warn_unknown_countries(unknown, result.warnings);
    return result;
}

ParsedReaderships parse_readerships(std::istream& in, Format format) {
    ParsedReaderships result;
    std::set<std::string> unknown;

    const auto consume = [&](std::optional<corpus::ReadershipRecord> record,
                             const std::string& where) {
        result.read += 1;
        if (!record) {
            result.rejected += 1;
            result.warnings.push_back(where + ": malformed readership record skipped");
            return;
        }
        const auto violations = corpus::validate(*record);
        if (!violations.empty()) {
            result.rejected += 1;
            std::string msg = where + ": readership rejected:";
            for (const auto& v : violations) msg += " " + v + ";";
            msg.pop_back();
            result.warnings.push_back(msg);
            return;
        }
        result.records.push_back(std::move(*record));
    };

    if (format == Format::jsonl) {
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            const json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
            const std::string where = "readers line " + std::to_string(line_no);
            if (j.is_discarded()) {
                result.read += 1;
                result.rejected += 1;
                result.warnings.push_back(where + ": invalid JSON skipped");
                continue;
            }
            consume(readership_from_json(j, unknown), where);
        }
    } else {
        const HeaderIndex idx = require_header(
            in, {"doi", "title", "year", "first_author", "reader_count", "reader_countries"},
            "readers");
        std::size_t line_no = 1;
        while (auto row = detail::read_csv_row(in)) {
            ++line_no;
            if (row->size() == 1 && (*row)[0].empty()) continue;
            const std::string where = "readers line " + std::to_string(line_no);
            corpus::ReadershipRecord r;
            r.doi = cell(*row, idx.find("doi"));
            r.title = cell(*row, idx.find("title"));
            r.first_author = cell(*row, idx.find("first_author"));
            const auto year = to_int64(cell(*row, idx.find("year")));
            const auto readers = to_int64(cell(*row, idx.find("reader_count")));
            auto countries =
                parse_reader_countries_cell(cell(*row, idx.find("reader_countries")), unknown);
            if (!year || !readers || !countries) {
                consume(std::nullopt, where);
                continue;
            }
            r.year = static_cast<int>(*year);
            r.reader_count = *readers;
            r.reader_countries = std::move(*countries);
            consume(std::move(r), where);
        }
    }
    if (in.bad()) throw UserError("readers: stream error while reading");
    warn_unknown_countries(unknown, result.warnings);
    return result;
}

corpus::LinkedCorpus link(const std::vector<corpus::ArticleRecord>& articles,
                          const std::vector<corpus::ReadershipRecord>& readerships,
                          IngestReport parse_counts) {
    std::vector<corpus::LinkedArticle> linked;
    linked.reserve(articles.size());
    for (const auto& a : articles) linked.push_back({a, 0, {}});

    // Indexes. DOI wins outright; the title triple needs a unique hit; a
    // title+surname probe distinguishes wrong-year discards from true misses.
    std::unordered_map<std::string, std::vector<std::size_t>> by_doi;
    std::map<std::tuple<std::string, int, std::string>, std::vector<std::size_t>> by_triple;
    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> by_title_author;
    for (std::size_t i = 0; i < articles.size(); ++i) {
        const MatchKey key = key_of(articles[i]);
        if (!key.doi.empty()) by_doi[key.doi].push_back(i);
        by_triple[{key.normalized_title, key.year, key.first_author_surname}].push_back(i);
        by_title_author[{key.normalized_title, key.first_author_surname}].push_back(i);
    }

    IngestReport report = parse_counts;
    report.readerships_read = readerships.size();
    report.matched = 0;
    report.discarded_wrong_year = 0;
    report.discarded_wrong_doi = 0;
    report.unmatched_readerships = 0;

    const auto accept = [&](std::size_t article_idx, const corpus::ReadershipRecord& r) {
        auto& target = linked[article_idx];
        target.readers += r.reader_count;
        for (const auto& [country, n] : r.reader_countries) {
            target.reader_countries[country] += n;
        }
        report.matched += 1;
    };

    for (const auto& r : readerships) {
        const MatchKey key = key_of(r);

        if (!key.doi.empty()) {
            const auto it = by_doi.find(key.doi);
            if (it != by_doi.end()) {
                if (it->second.size() == 1) {
                    accept(it->second.front(), r);
                } else {
                    report.unmatched_readerships += 1;  // ambiguous DOI
                }
                continue;
            }
        }

        const auto triple_it =
            by_triple.find({key.normalized_title, key.year, key.first_author_surname});
        if (triple_it != by_triple.end() && !triple_it->second.empty()) {
            if (triple_it->second.size() > 1) {
                report.unmatched_readerships += 1;  // ambiguous key
                continue;
            }
            const std::size_t idx = triple_it->second.front();
            const std::string article_doi = text::normalize_doi(articles[idx].doi);
            if (!key.doi.empty() && !article_doi.empty() && key.doi != article_doi) {
                report.discarded_wrong_doi += 1;
                continue;
            }
            accept(idx, r);
            continue;
        }

        const auto pair_it =
            by_title_author.find({key.normalized_title, key.first_author_surname});
        if (pair_it != by_title_author.end() && !pair_it->second.empty()) {
            report.discarded_wrong_year += 1;
        } else {
            report.unmatched_readerships += 1;
        }
    }

    return corpus::LinkedCorpus::from_articles(std::move(linked), report);
}

void write_corpus_jsonl(const corpus::LinkedCorpus& corpus, std::ostream& out) {
    for (const auto& a : corpus.articles()) {
        json j;
        j["id"] = a.article.id;
        j["doi"] = a.article.doi;
        j["title"] = a.article.title;
        j["year"] = a.article.year;
        j["field"] = a.article.field;
        j["doc_type"] = a.article.doc_type;
        json authors = json::array();
        for (const auto& au : a.article.authors) {
            authors.push_back({{"name", au.name}, {"country", au.country}});
        }
        j["authors"] = std::move(authors);
        j["citations"] = a.article.citations;
        j["readers"] = a.readers;
        j["reader_countries"] = a.reader_countries;
        out << j.dump() << '\n';
    }
}

corpus::LinkedCorpus read_corpus_jsonl(std::istream& in) {
    std::vector<corpus::LinkedArticle> articles;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded()) {
            throw UserError("corpus line " + std::to_string(line_no) + ": invalid JSON");
        }
        std::set<std::string> unknown;  // already normalized when written
        auto record = article_from_json(j, unknown);
        if (!record || !j.contains("readers") || !j.at("readers").is_number_integer()) {
            throw UserError("corpus line " + std::to_string(line_no) +
                            ": not a canonical linked-corpus record");
        }
        corpus::LinkedArticle linked;
        linked.article = std::move(*record);
        linked.readers = j.at("readers").get<std::int64_t>();
        if (j.contains("reader_countries") && j.at("reader_countries").is_object()) {
            for (const auto& [code, n] : j.at("reader_countries").items()) {
                if (!n.is_number_integer()) {
                    throw UserError("corpus line " + std::to_string(line_no) +
                                    ": bad reader_countries");
                }
                linked.reader_countries[code] = n.get<std::int64_t>();
            }
        }
        articles.push_back(std::move(linked));
    }
    if (in.bad()) throw UserError("corpus: stream error while reading");
    return corpus::LinkedCorpus::from_articles(std::move(articles));
}

void write_report_json(const IngestReport& report, std::ostream& out) {
    json j;
    j["articles_read"] = report.articles_read;
    j["articles_rejected"] = report.articles_rejected;
    j["readerships_read"] = report.readerships_read;
    j["readerships_rejected"] = report.readerships_rejected;
    j["matched"] = report.matched;
    j["discarded_wrong_year"] = report.discarded_wrong_year;
    j["discarded_wrong_doi"] = report.discarded_wrong_doi;
    j["unmatched_readerships"] = report.unmatched_readerships;
    out << j.dump(2) << '\n';
}

}  // namespace impactis::ingest
