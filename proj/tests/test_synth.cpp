#include <doctest.h>

#include <cmath>
#include <sstream>

#include "impactis/corrections.hpp"
#include "impactis/errors.hpp"
#include "impactis/indicators.hpp"
#include "impactis/ingest.hpp"
#include "impactis/synth.hpp"

using namespace impactis;

namespace {

synth::SynthConfig base_config() {
    synth::SynthConfig cfg;
    cfg.seed = 20240901;
    cfg.min_year = 2009;
    cfg.max_year = 2011;
    cfg.fields = {{"alpha", 300}, {"beta", 200}};
    cfg.countries = {
        {"GB", 1.0, 1.0, 1.0, 0.0},
        {"DE", 0.8, 1.0, 1.0, 0.0},
        {"IT", 0.6, 1.0, 1.0, 0.0},
    };
    cfg.declared_fraction = 0.4;
    return cfg;
}

corpus::LinkedCorpus run_pipeline(const synth::SynthConfig& cfg) {
    std::ostringstream articles, readers;
    synth::generate(cfg, articles, readers);
    std::istringstream articles_in(articles.str()), readers_in(readers.str());
    corpus::ValidationOptions opts;
    const auto pa = ingest::parse_articles(articles_in, ingest::Format::jsonl, opts);
    const auto pr = ingest::parse_readerships(readers_in, ingest::Format::jsonl);
    REQUIRE(pa.rejected == 0);
    REQUIRE(pr.rejected == 0);
    ingest::IngestReport counts;
    counts.articles_read = pa.read;
    counts.readerships_rejected = pr.rejected;
    return ingest::link(pa.records, pr.records, counts);
}

}  // namespace

TEST_CASE("config loading validates structure and ranges") {
    std::istringstream ok(R"({"seed": 7, "years": {"min": 2009, "max": 2010},
        "fields": [{"name": "x", "articles_per_year": 10}],
        "countries": [{"code": "GB"}], "declared_fraction": 0.5})");
    const auto cfg = synth::load_config(ok);
    CHECK(cfg.seed == 7);
    CHECK(cfg.countries[0].output_weight == 1.0);

    std::istringstream no_seed(R"({"years": {"min": 1, "max": 2},
        "fields": [{"name": "x", "articles_per_year": 1}],
        "countries": [{"code": "GB"}]})");
    CHECK_THROWS_AS(synth::load_config(no_seed), UserError);

    std::istringstream bad_fraction(R"({"seed": 1, "years": {"min": 1, "max": 2},
        "fields": [{"name": "x", "articles_per_year": 1}],
        "countries": [{"code": "GB"}], "declared_fraction": 1.5})");
    CHECK_THROWS_AS(synth::load_config(bad_fraction), UserError);

    std::istringstream not_json("]]");
    CHECK_THROWS_AS(synth::load_config(not_json), UserError);

    synth::SynthConfig degenerate;
    degenerate.min_year = 2010;
    degenerate.max_year = 2009;
    CHECK_THROWS_AS(synth::check(degenerate), UserError);
}

TEST_CASE("identical seeds give identical bytes, different seeds differ") {
    auto cfg = base_config();
    std::ostringstream a1, r1, a2, r2;
    synth::generate(cfg, a1, r1);
    synth::generate(cfg, a2, r2);
    CHECK(a1.str() == a2.str());
    CHECK(r1.str() == r2.str());

    cfg.seed += 1;
    std::ostringstream a3, r3;
    synth::generate(cfg, a3, r3);
    CHECK(a1.str() != a3.str());
}

TEST_CASE("generated files round-trip through ingest with nothing rejected") {
    const auto corpus = run_pipeline(base_config());
    const auto& rep = corpus.provenance();
    CHECK(corpus.articles().size() == (300 + 200) * 3);
    CHECK(rep.matched == rep.readerships_read);
    CHECK(rep.unmatched_readerships == 0);
    CHECK(rep.discarded_wrong_year == 0);
    CHECK(rep.discarded_wrong_doi == 0);
}

TEST_CASE("a symmetric configuration scores every country near 1") {
    const auto corpus = run_pipeline(base_config());
    const auto table =
        indicators::country_indicator(corpus, indicators::Metric::citations);
    for (const auto& [key, cell] : table.cells) {
        REQUIRE(cell.valid);
        CHECK(std::abs(cell.value - 1.0) < 0.2);  // sampling noise at 500/field-year
    }
}

TEST_CASE("reader uptake is recovered by the bias factor") {
    auto cfg = base_config();
    cfg.fields = {{"alpha", 1200}};
    cfg.min_year = 2009;
    cfg.max_year = 2010;
    cfg.countries = {
        {"GB", 1.0, 1.0, 2.0, 0.0},  // double uptake
        {"FR", 1.0, 1.0, 1.0, 0.0},
    };
    cfg.coauthors_mean = 0.0;  // single-country articles keep the contrast clean
    const auto corpus = run_pipeline(cfg);
    const auto cit = indicators::country_indicator(corpus, indicators::Metric::citations);
    const auto rdr = indicators::country_indicator(corpus, indicators::Metric::readers);
    const auto factors = corrections::bias_factor(rdr, cit, {2009, 2010});
    const double ratio = factors.b.at("GB") / factors.b.at("FR");
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.15));
}
