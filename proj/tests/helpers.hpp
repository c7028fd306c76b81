#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "impactis/corpus.hpp"

namespace impactis::testing {

inline corpus::LinkedArticle art(std::string id, std::string field, int year,
                                 std::vector<std::string> countries,
                                 std::int64_t citations, std::int64_t readers = 0,
                                 std::map<std::string, std::int64_t> reader_countries = {}) {
    corpus::LinkedArticle a;
    a.article.id = std::move(id);
    a.article.title = "Title " + a.article.id;
    a.article.field = std::move(field);
    a.article.year = year;
    a.article.doc_type = "article";
    int seq = 0;
    for (auto& c : countries) {
        a.article.authors.push_back({"Author " + std::to_string(seq++), std::move(c)});
    }
    a.article.citations = citations;
    a.readers = readers;
    a.reader_countries = std::move(reader_countries);
    return a;
}

inline corpus::LinkedCorpus make_corpus(std::vector<corpus::LinkedArticle> articles) {
    return corpus::LinkedCorpus::from_articles(std::move(articles));
}

// 12 articles, 3 countries, 2 fields, 2 years. The expected indicator
// values in fixture12_expected.hpp were produced by
// tests/oracle/indicator_oracle.py, which transcribes the formulas directly
// and shares no code with the engine.
inline corpus::LinkedCorpus fixture12() {
    return make_corpus({
        art("a01", "bio", 2009, {"ES", "ES", "ES", "AR"}, 10, 20),
        art("a02", "bio", 2009, {"GB"}, 0, 5),
        art("a03", "bio", 2009, {"AR", "GB"}, 4, 1),
        art("a04", "math", 2009, {"ES"}, 7, 0),
        art("a05", "math", 2009, {"ES", "AR"}, 3, 9),
        art("a06", "math", 2009, {"GB", "GB", "AR"}, 5, 6),
        art("a07", "bio", 2010, {"AR"}, 2, 8),
        art("a08", "bio", 2010, {"ES", "GB"}, 6, 12),
        art("a09", "bio", 2010, {"GB", "AR", "ES"}, 1, 2),
        art("a10", "math", 2010, {"GB"}, 8, 10),
        art("a11", "math", 2010, {"AR", "AR"}, 0, 3),
        art("a12", "math", 2010, {"ES", "GB", "GB", "GB"}, 12, 7),
    });
}

}  // namespace impactis::testing
