#include <benchmark/benchmark.h>

#include <sstream>

#include "impactis/corpus.hpp"
#include "impactis/indicators.hpp"
#include "impactis/ingest.hpp"
#include "impactis/synth.hpp"

namespace {

using namespace impactis;

synth::SynthConfig bench_config(int articles_per_year) {
    synth::SynthConfig cfg;
    cfg.seed = 8080;
    cfg.min_year = 2009;
    cfg.max_year = 2013;
    cfg.fields = {{"alpha", articles_per_year}, {"beta", articles_per_year}};
    cfg.countries = {
        {"GB", 1.0, 1.2, 1.5, 0.2}, {"DE", 0.8, 1.0, 1.0, 0.1},
        {"IT", 0.5, 0.9, 2.0, 0.3}, {"US", 1.5, 1.1, 1.2, 0.2},
    };
    cfg.declared_fraction = 0.35;
    return cfg;
}

corpus::LinkedCorpus bench_corpus(int articles_per_year) {
    std::ostringstream articles, readers;
    synth::generate(bench_config(articles_per_year), articles, readers);
    std::istringstream articles_in(articles.str()), readers_in(readers.str());
    corpus::ValidationOptions opts;
    const auto pa = ingest::parse_articles(articles_in, ingest::Format::jsonl, opts);
    const auto pr = ingest::parse_readerships(readers_in, ingest::Format::jsonl);
    return ingest::link(pa.records, pr.records);
}

void BM_fractional_shares(benchmark::State& state) {
    const auto c = bench_corpus(200);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& a = c.articles()[i++ % c.articles().size()];
        benchmark::DoNotOptimize(corpus::fractional_shares(a.article));
    }
}
BENCHMARK(BM_fractional_shares);

void BM_generate(benchmark::State& state) {
    const auto cfg = bench_config(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        std::ostringstream articles, readers;
        synth::generate(cfg, articles, readers);
        benchmark::DoNotOptimize(articles.str().size());
    }
    state.SetItemsProcessed(state.iterations() * 2 * state.range(0) * 5);
}
BENCHMARK(BM_generate)->Arg(100)->Arg(400);

void BM_link(benchmark::State& state) {
    std::ostringstream articles, readers;
    synth::generate(bench_config(static_cast<int>(state.range(0))), articles, readers);
    std::istringstream articles_in(articles.str()), readers_in(readers.str());
    corpus::ValidationOptions opts;
    const auto pa = ingest::parse_articles(articles_in, ingest::Format::jsonl, opts);
    const auto pr = ingest::parse_readerships(readers_in, ingest::Format::jsonl);
    for (auto _ : state) {
        benchmark::DoNotOptimize(ingest::link(pa.records, pr.records));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pa.records.size()));
}
BENCHMARK(BM_link)->Arg(200)->Arg(1000);

void BM_country_indicator(benchmark::State& state) {
    const auto c = bench_corpus(static_cast<int>(state.range(0)));
    const auto threads = static_cast<unsigned>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            indicators::country_indicator(c, indicators::Metric::citations, threads));
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(c.articles().size()));
}
BENCHMARK(BM_country_indicator)
    ->Args({200, 1})
    ->Args({2000, 1})
    ->Args({2000, 4})
    ->Args({2000, 8});

}  // namespace

BENCHMARK_MAIN();
