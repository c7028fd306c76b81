#include <doctest.h>

#include <cmath>
#include <random>

#include "fixture12_expected.hpp"
#include "helpers.hpp"
#include "impactis/errors.hpp"
#include "impactis/indicators.hpp"

using namespace impactis;
using impactis::testing::art;
using impactis::testing::make_corpus;
using indicators::Metric;

namespace {

// Random corpora for property checks; the generator is test-local and
// independent of the synth module.
corpus::LinkedCorpus random_corpus(std::mt19937_64& rng, int max_articles = 400) {
    const std::vector<std::string> countries = {"GB", "DE", "IT", "US", "NA"};
    const std::vector<std::string> fields = {"f1", "f2", "f3"};
    const int n_years = 2 + int(rng() % 3);
    const int n_articles = 20 + int(rng() % std::uint64_t(max_articles - 20));
    std::vector<corpus::LinkedArticle> articles;
    for (int i = 0; i < n_articles; ++i) {
        const int year = 2009 + int(rng() % std::uint64_t(n_years));
        const auto& field = fields[rng() % fields.size()];
        std::vector<std::string> authors;
        const std::size_t n_auth = 1 + rng() % 4;
        for (std::size_t k = 0; k < n_auth; ++k) {
            authors.push_back(countries[rng() % countries.size()]);
        }
        const std::int64_t citations = std::int64_t(rng() % 7);  // zeros common
        const std::int64_t readers = std::int64_t(rng() % 9);
        articles.push_back(
            art("r" + std::to_string(i), field, year, authors, citations, readers));
    }
    return make_corpus(std::move(articles));
}

}  // namespace

TEST_CASE("field-year mean is the plain average") {
    const auto c = make_corpus({
        art("a", "f", 2010, {"GB"}, 0),
        art("b", "f", 2010, {"GB"}, 10),
    });
    CHECK(indicators::field_year_mean(c, Metric::citations, {"f", 2010}) == 5.0);

    const auto zeros = make_corpus({
        art("a", "f", 2010, {"GB"}, 0),
        art("b", "f", 2010, {"GB"}, 0),
    });
    CHECK(indicators::field_year_mean(zeros, Metric::citations, {"f", 2010}) == 0.0);

    const auto three = make_corpus({
        art("a", "f", 2010, {"GB"}, 3),
        art("b", "f", 2010, {"GB"}, 4),
        art("c", "f", 2010, {"GB"}, 8),
    });
    CHECK(indicators::field_year_mean(three, Metric::citations, {"f", 2010}) == 5.0);

    CHECK_THROWS_AS(indicators::field_year_mean(three, Metric::citations, {"g", 2010}),
                    UserError);
}

TEST_CASE("article normalization divides by the field-year mean") {
    const auto c = make_corpus({
        art("a", "f", 2010, {"GB"}, 0),
        art("b", "f", 2010, {"GB"}, 10),
    });
    const auto& articles = c.articles();
    CHECK(indicators::normalize_article(c, Metric::citations, articles[1]) ==
          doctest::Approx(2.0).epsilon(1e-12));

    // an article sitting exactly at its field-year mean normalizes to 1
    const auto balanced = make_corpus({
        art("a", "f", 2010, {"GB"}, 5),
        art("b", "f", 2010, {"GB"}, 5),
    });
    CHECK(*indicators::normalize_article(balanced, Metric::citations,
                                         balanced.articles()[0]) == 1.0);

    const auto zeros = make_corpus({
        art("a", "f", 2010, {"GB"}, 0),
        art("b", "f", 2010, {"GB"}, 0, 4),
    });
    CHECK_FALSE(
        indicators::normalize_article(zeros, Metric::citations, zeros.articles()[0]));
    // readers metric unaffected by the zero citation total
    CHECK(indicators::normalize_article(zeros, Metric::readers, zeros.articles()[1]));
}

TEST_CASE("country output sums fractional shares for the year") {
    const auto single = make_corpus({art("a", "f", 2011, {"FR", "DE"}, 3)});
    const auto out = indicators::country_output(single, Metric::citations, 2011);
    CHECK(out.at("FR") == 0.5);
    CHECK(out.at("DE") == 0.5);

    const auto two = make_corpus({
        art("a", "f", 2011, {"FR"}, 1),
        art("b", "f", 2011, {"FR"}, 2),
    });
    CHECK(indicators::country_output(two, Metric::citations, 2011).at("FR") == 2.0);
}

TEST_CASE("country output matches the brute-force oracle on a mixed corpus") {
    // expected values from tests/oracle/indicator_oracle.py, micro fixture M1
    const auto c = make_corpus({
        art("m1", "f", 2011, {"FR", "DE"}, 3, 0),
        art("m2", "f", 2011, {"FR"}, 0, 2),
        art("m3", "f", 2011, {"DE", "DE", "FR"}, 5, 1),
        art("m4", "f", 2011, {"ES"}, 2, 7),
    });
    const auto out = indicators::country_output(c, Metric::citations, 2011);
    CHECK(out.at("FR") == doctest::Approx(1.83333333333333).epsilon(1e-9));
    CHECK(out.at("DE") == doctest::Approx(1.16666666666667).epsilon(1e-9));
    CHECK(out.at("ES") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a corpus owned by one country scores 1.0 everywhere") {
    const auto c = make_corpus({
        art("a", "f", 2010, {"GB"}, 4),
        art("b", "f", 2010, {"GB"}, 1),
        art("c", "g", 2010, {"GB"}, 9),
        art("d", "f", 2011, {"GB"}, 2),
    });
    const auto table = indicators::country_indicator(c, Metric::citations);
    for (const auto& [key, cell] : table.cells) {
        REQUIRE(cell.valid);
        CHECK(cell.value == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("country indicator matches the brute-force oracle on one field-year") {
    // expected values from tests/oracle/indicator_oracle.py, micro fixture M2
    const auto c = make_corpus({
        art("n1", "g", 2012, {"ES"}, 4),
        art("n2", "g", 2012, {"ES", "GB"}, 1),
        art("n3", "g", 2012, {"GB"}, 7),
    });
    const auto table = indicators::country_indicator(c, Metric::citations);
    const auto* es = table.find("ES", 2012);
    const auto* gb = table.find("GB", 2012);
    REQUIRE(es);
    REQUIRE(gb);
    CHECK(es->value == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(gb->value == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(es->output == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("country indicator reproduces the frozen 12-article oracle") {
    const auto c = testing::fixture12();
    const auto cit = indicators::country_indicator(c, Metric::citations);
    const auto rdr = indicators::country_indicator(c, Metric::readers);
    for (const auto& [key, expected] : testing::expected::kAfyncc) {
        const auto* cell = cit.find(key.first, key.second);
        REQUIRE(cell);
        REQUIRE(cell->valid);
        CHECK(std::abs(cell->value - expected) < 1e-9);
        CHECK(std::abs(cell->output - testing::expected::kOutput.at(key)) < 1e-9);
    }
    for (const auto& [key, expected] : testing::expected::kAfynrc) {
        const auto* cell = rdr.find(key.first, key.second);
        REQUIRE(cell);
        CHECK(std::abs(cell->value - expected) < 1e-9);
    }
}

TEST_CASE("zero output and zero field-year totals are flagged distinctly") {
    const auto c = make_corpus({
        art("a", "f", 2009, {"ES"}, 3),
        art("b", "f", 2010, {"GB"}, 2),
        art("c", "z", 2010, {"IT"}, 0),  // IT only publishes in a zero-total field-year
        art("d", "z", 2010, {"GB"}, 0),
    });
    const auto table = indicators::country_indicator(c, Metric::citations);

    const auto* es_2010 = table.find("ES", 2010);
    REQUIRE(es_2010);
    CHECK_FALSE(es_2010->valid);
    CHECK(es_2010->reason == indicators::kReasonZeroOutput);

    const auto* it_2010 = table.find("IT", 2010);
    REQUIRE(it_2010);
    CHECK_FALSE(it_2010->valid);
    CHECK(it_2010->reason == indicators::kReasonZeroFieldYearTotal);

    // GB still gets a value from field f alone
    const auto* gb_2010 = table.find("GB", 2010);
    REQUIRE(gb_2010);
    CHECK(gb_2010->valid);
    CHECK(gb_2010->output == doctest::Approx(1.0));  // the z article dropped out
}

TEST_CASE("normalization closure properties hold on random corpora") {
    std::mt19937_64 rng(7041);
    for (int trial = 0; trial < 30; ++trial) {
        const auto c = random_corpus(rng);
        for (Metric metric : {Metric::citations, Metric::readers}) {
            // per field-year: mean normalized value is 1 for positive totals
            std::map<indicators::FieldYearKey, std::pair<double, int>> sums;
            for (const auto& a : c.articles()) {
                const auto v = indicators::normalize_article(c, metric, a);
                if (!v) continue;
                auto& s = sums[{a.article.field, a.article.year}];
                s.first += *v;
                s.second += 1;
            }
            for (const auto& [key, s] : sums) {
                CHECK(std::abs(s.first / s.second - 1.0) < 1e-9);
            }

            // per year: output-weighted world average is 1
            const auto table = indicators::country_indicator(c, metric);
            for (int year : c.years()) {
                double num = 0.0, den = 0.0;
                for (const auto& [key, cell] : table.cells) {
                    if (key.second != year || !cell.valid) continue;
                    num += cell.value * cell.output;
                    den += cell.output;
                }
                if (den > 0.0) CHECK(std::abs(num / den - 1.0) < 1e-9);
            }

            // outputs per year add up to the number of defined articles
            for (int year : c.years()) {
                double total_output = 0.0;
                for (const auto& [key, cell] : table.cells) {
                    if (key.second == year && cell.valid) total_output += cell.output;
                }
                int defined = 0;
                for (const auto& a : c.articles()) {
                    if (a.article.year == year &&
                        indicators::normalize_article(c, metric, a)) {
                        ++defined;
                    }
                }
                CHECK(std::abs(total_output - defined) < 1e-9);
            }
        }
    }
}

TEST_CASE("scaling one field-year leaves its normalized values unchanged") {
    std::mt19937_64 rng(99);
    const auto base = random_corpus(rng, 120);
    std::vector<corpus::LinkedArticle> scaled = base.articles();
    const std::string target_field = scaled.front().article.field;
    const int target_year = scaled.front().article.year;
    for (auto& a : scaled) {
        if (a.article.field == target_field && a.article.year == target_year) {
            a.article.citations *= 3;
        }
    }
    const auto c2 = make_corpus(std::move(scaled));
    for (std::size_t i = 0; i < base.articles().size(); ++i) {
        const auto& a = base.articles()[i];
        if (a.article.field != target_field || a.article.year != target_year) continue;
        const auto before =
            indicators::normalize_article(base, Metric::citations, a);
        const auto after =
            indicators::normalize_article(c2, Metric::citations, c2.articles()[i]);
        REQUIRE(before.has_value() == after.has_value());
        if (before) CHECK(std::abs(*before - *after) < 1e-12);
    }
}

TEST_CASE("reader tables ignore citation edits and vice versa") {
    std::mt19937_64 rng(1234);
    const auto base = random_corpus(rng, 150);
    std::vector<corpus::LinkedArticle> edited = base.articles();
    for (auto& a : edited) a.article.citations += 17;
    const auto c2 = make_corpus(std::move(edited));

    CHECK(indicators::country_indicator(base, Metric::readers) ==
          indicators::country_indicator(c2, Metric::readers));
    CHECK_FALSE(indicators::country_indicator(base, Metric::citations) ==
                indicators::country_indicator(c2, Metric::citations));
}

TEST_CASE("thread count never changes the result") {
    // large enough for several reduction chunks
    std::mt19937_64 rng(5150);
    const std::vector<std::string> countries = {"GB", "DE", "IT", "US"};
    std::vector<corpus::LinkedArticle> articles;
    for (int i = 0; i < 10000; ++i) {
        articles.push_back(art("t" + std::to_string(i), "f" + std::to_string(rng() % 3),
                               2009 + int(rng() % 3),
                               {countries[rng() % countries.size()],
                                countries[rng() % countries.size()]},
                               std::int64_t(rng() % 20), std::int64_t(rng() % 30)));
    }
    const auto c = make_corpus(std::move(articles));
    const auto t1 = indicators::country_indicator(c, Metric::citations, 1);
    const auto t4 = indicators::country_indicator(c, Metric::citations, 4);
    const auto t8 = indicators::country_indicator(c, Metric::citations, 8);
    CHECK(t1 == t4);
    CHECK(t1 == t8);
}

TEST_CASE("empty corpus cannot be aggregated") {
    corpus::LinkedCorpus empty;
    CHECK_THROWS_AS(indicators::country_indicator(empty, Metric::citations), UserError);
}

TEST_CASE("metric names round-trip") {
    using indicators::Indicator;
    for (Indicator m : {Indicator::afyncc, Indicator::afynrc, Indicator::accfynrc,
                        Indicator::accfymucnrc, Indicator::afymucnrc}) {
        CHECK(indicators::indicator_from_name(indicators::indicator_name(m)) == m);
    }
    CHECK_THROWS_AS(indicators::indicator_from_name("bogus"), UserError);
}
