#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "impactis/corrections.hpp"
#include "impactis/corpus.hpp"
#include "impactis/errors.hpp"
#include "impactis/indicators.hpp"
#include "impactis/ingest.hpp"
#include "impactis/report.hpp"
#include "impactis/synth.hpp"
#include "impactis/text.hpp"

namespace impactis::cli {

namespace {

namespace fs = std::filesystem;
using indicators::Indicator;

std::ifstream open_input(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UserError("cannot open input file: " + path.string());
    return f;
}

// All outputs are written in binary mode so line endings stay LF everywhere.
std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UserError("cannot open output file: " + path.string());
    return f;
}

ingest::Format resolve_format(const std::string& flag, const fs::path& path) {
    if (flag != "auto") return ingest::format_from_name(flag);
    return path.extension() == ".csv" ? ingest::Format::csv : ingest::Format::jsonl;
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::set<int> parse_years(const std::string& csv) {
    std::set<int> out;
    for (const auto& item : split_list(csv)) {
        try {
            out.insert(std::stoi(item));
        } catch (const std::exception&) {
            throw UserError("bad year '" + item + "' in '" + csv + "'");
        }
    }
    return out;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

unsigned resolve_threads(int flag_value) {
    if (flag_value > 0) return static_cast<unsigned>(flag_value);
    if (const char* env = std::getenv("IMPACTIS_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void write_manifest(const fs::path& path, const nlohmann::json& config) {
    auto out = open_output(path);
    out << config.dump(2) << '\n';
}

// ---- ingest -------------------------------------------------------------

struct IngestArgs {
    std::string articles, readers, out, report, manifest;
    std::string format = "auto";
    int min_year = 1000;
    int max_year = 9999;
    std::string doc_type = "article";
};

int cmd_ingest(const IngestArgs& args) {
    corpus::ValidationOptions opts;
    opts.min_year = args.min_year;
    opts.max_year = args.max_year;
    opts.accepted_doc_type = args.doc_type;

    auto articles_in = open_input(args.articles);
    auto parsed_articles = ingest::parse_articles(
        articles_in, resolve_format(args.format, args.articles), opts);
    print_warnings(parsed_articles.warnings);

    auto readers_in = open_input(args.readers);
    auto parsed_readers = ingest::parse_readerships(
        readers_in, resolve_format(args.format, args.readers));
    print_warnings(parsed_readers.warnings);

    ingest::IngestReport counts;
    counts.articles_read = parsed_articles.read;
    counts.articles_rejected = parsed_articles.rejected;
    counts.readerships_rejected = parsed_readers.rejected;

    const auto corpus =
        ingest::link(parsed_articles.records, parsed_readers.records, counts);

    auto corpus_out = open_output(args.out);
    ingest::write_corpus_jsonl(corpus, corpus_out);

    if (!args.report.empty()) {
        auto report_out = open_output(args.report);
        ingest::write_report_json(corpus.provenance(), report_out);
    }
    if (!args.manifest.empty()) {
        nlohmann::json m;
        m["command"] = "ingest";
        m["articles"] = args.articles;
        m["readers"] = args.readers;
        m["out"] = args.out;
        m["report"] = args.report;
        m["format"] = args.format;
        m["min_year"] = args.min_year;
        m["max_year"] = args.max_year;
        m["doc_type"] = args.doc_type;
        write_manifest(args.manifest, m);
    }

    const auto& rep = corpus.provenance();
    std::cerr << "ingest: " << corpus.articles().size() << " articles, "
              << rep.matched << " readerships matched, " << rep.unmatched_readerships
              << " unmatched\n";
    return 0;
}

// ---- compute ------------------------------------------------------------

struct ComputeArgs {
    std::string corpus, out_dir, manifest;
    std::string metrics = "afyncc,afynrc";
    std::string base_years;
    std::string countries;
    std::string bias_profile;
    bool include_na = false;
    int threads = 0;
};

int cmd_compute(const ComputeArgs& args) {
    auto corpus_in = open_input(args.corpus);
    const auto corpus = ingest::read_corpus_jsonl(corpus_in);
    if (corpus.empty()) throw UserError("corpus is empty: " + args.corpus);

    std::set<Indicator> requested;
    for (const auto& name : split_list(args.metrics)) {
        requested.insert(indicators::indicator_from_name(name));
    }
    if (requested.empty()) throw UserError("no metrics requested");

    const auto corpus_years = corpus.years();
    std::set<int> base_years;
    if (args.base_years.empty()) {
        // Default base period: the two earliest corpus years.
        for (int y : corpus_years) {
            base_years.insert(y);
            if (base_years.size() == 2) break;
        }
    } else {
        base_years = parse_years(args.base_years);
        for (int y : base_years) {
            if (!std::binary_search(corpus_years.begin(), corpus_years.end(), y)) {
                throw UserError("base year " + std::to_string(y) +
                                " not present in corpus");
            }
        }
    }

    const bool want_profile = !args.bias_profile.empty();
    const bool need_factors = requested.contains(Indicator::accfynrc) ||
                              requested.contains(Indicator::accfymucnrc) || want_profile;
    const bool need_stats = requested.contains(Indicator::accfymucnrc) ||
                            requested.contains(Indicator::afymucnrc) || want_profile;
    const bool need_citations = requested.contains(Indicator::afyncc) || need_factors;
    const bool need_readers = requested.contains(Indicator::afynrc) ||
                              requested.contains(Indicator::afymucnrc) || need_factors;

    const unsigned threads = resolve_threads(args.threads);

    indicators::IndicatorTable citation_table, reader_table;
    if (need_citations) {
        citation_table =
            indicators::country_indicator(corpus, indicators::Metric::citations, threads);
    }
    if (need_readers) {
        reader_table =
            indicators::country_indicator(corpus, indicators::Metric::readers, threads);
    }

    corrections::BiasFactors factors;
    if (need_factors) {
        factors = corrections::bias_factor(reader_table, citation_table, base_years);
    }
    corrections::ReaderCountryStats stats;
    if (need_stats) {
        stats = corrections::reader_country_stats(corpus, base_years);
        print_warnings(stats.warnings);
    }

    const auto countries_for = [&](const indicators::IndicatorTable& table) {
        if (!args.countries.empty()) {
            std::vector<std::string> out;
            for (const auto& c : split_list(args.countries)) {
                out.push_back(text::to_upper_ascii(c));
            }
            return out;
        }
        return report::default_countries(table, args.include_na);
    };

    const auto export_table = [&](const indicators::IndicatorTable& table) {
        const fs::path path =
            fs::path(args.out_dir) / (std::string(indicators::indicator_name(table.metric)) + ".csv");
        auto out = open_output(path);
        report::export_timeseries(table, countries_for(table), out);
    };

    // Fixed output order keeps runs reproducible regardless of flag order.
    if (requested.contains(Indicator::afyncc)) export_table(citation_table);
    if (requested.contains(Indicator::afynrc)) export_table(reader_table);

    indicators::IndicatorTable acc_table;
    if (need_factors) {
        acc_table = corrections::citation_corrected(reader_table, factors);
    }
    if (requested.contains(Indicator::accfynrc)) export_table(acc_table);
    if (requested.contains(Indicator::accfymucnrc)) {
        export_table(
            corrections::uptake_change_corrected(acc_table, stats.incr, stats.self_bias));
    }
    if (requested.contains(Indicator::afymucnrc)) {
        export_table(
            corrections::direct_uptake_corrected(reader_table, stats.share, stats.self_bias));
    }

    if (want_profile) {
        corrections::BiasProfile profile;
        profile.base_years = base_years;
        profile.factors = factors;
        profile.stats = stats;
        auto out = open_output(args.bias_profile);
        corrections::write_bias_profile_json(profile, out);
    }

    nlohmann::json m;
    m["command"] = "compute";
    m["corpus"] = args.corpus;
    m["out_dir"] = args.out_dir;
    m["metrics"] = args.metrics;
    m["base_years"] = base_years;
    m["countries"] = args.countries;
    m["include_na"] = args.include_na;
    m["bias_profile"] = args.bias_profile;
    const fs::path manifest_path = args.manifest.empty()
                                       ? fs::path(args.out_dir) / "run_manifest.json"
                                       : fs::path(args.manifest);
    write_manifest(manifest_path, m);
    return 0;
}

// ---- report -------------------------------------------------------------

struct ReportArgs {
    std::string corpus, out_dir, manifest;
    std::vector<std::string> tables;
    std::string countries;
    bool include_na = false;
};

int cmd_report(const ReportArgs& args) {
    if (args.corpus.empty() && args.tables.empty()) {
        throw UserError("report needs --corpus and/or --tables inputs");
    }

    if (!args.corpus.empty()) {
        auto corpus_in = open_input(args.corpus);
        const auto corpus = ingest::read_corpus_jsonl(corpus_in);
        const auto rows = report::summarize(corpus);
        auto out = open_output(fs::path(args.out_dir) / "summary.csv");
        report::write_summary_csv(rows, out);
    }

    for (const auto& table_path : args.tables) {
        auto in = open_input(table_path);
        const std::string stem = fs::path(table_path).stem().string();
        Indicator metric = Indicator::afyncc;
        try {
            metric = indicators::indicator_from_name(stem);
        } catch (const UserError&) {
            // chart title falls back to the file stem
        }
        const auto table = report::read_timeseries_csv(in, metric);

        std::vector<std::string> countries;
        if (!args.countries.empty()) {
            for (const auto& c : split_list(args.countries)) {
                countries.push_back(text::to_upper_ascii(c));
            }
        } else {
            countries = report::default_countries(table, args.include_na);
        }
        auto out = open_output(fs::path(args.out_dir) / (stem + ".svg"));
        report::render_chart(table, countries, out, stem);
    }

    nlohmann::json m;
    m["command"] = "report";
    m["corpus"] = args.corpus;
    m["tables"] = args.tables;
    m["out_dir"] = args.out_dir;
    m["countries"] = args.countries;
    m["include_na"] = args.include_na;
    const fs::path manifest_path = args.manifest.empty()
                                       ? fs::path(args.out_dir) / "run_manifest.json"
                                       : fs::path(args.manifest);
    write_manifest(manifest_path, m);
    return 0;
}

// ---- synth --------------------------------------------------------------

struct SynthArgs {
    std::string config, articles, readers, manifest;
};

int cmd_synth(const SynthArgs& args) {
    auto config_in = open_input(args.config);
    const auto config = synth::load_config(config_in);
    auto articles_out = open_output(args.articles);
    auto readers_out = open_output(args.readers);
    synth::generate(config, articles_out, readers_out);
    if (!args.manifest.empty()) {
        nlohmann::json m;
        m["command"] = "synth";
        m["config"] = args.config;
        m["articles"] = args.articles;
        m["readers"] = args.readers;
        m["seed"] = config.seed;
        write_manifest(args.manifest, m);
    }
    return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"national research impact indicators from citations and readership"};
    app.require_subcommand(1);
    // flags beat config-file entries, which beat built-in defaults
    app.set_config("--config-file", "", "INI file with default flags per subcommand");

    IngestArgs ingest_args;
    auto* ingest_cmd =
        app.add_subcommand("ingest", "parse and link article and readership files");
    ingest_cmd->fallthrough();
    ingest_cmd->add_option("--articles", ingest_args.articles, "articles file")->required();
    ingest_cmd->add_option("--readers", ingest_args.readers, "readerships file")->required();
    ingest_cmd->add_option("--out", ingest_args.out, "linked corpus JSONL output")->required();
    ingest_cmd->add_option("--report", ingest_args.report, "ingest report JSON output");
    ingest_cmd->add_option("--format", ingest_args.format,
                           "input format: auto, jsonl or csv (default auto)");
    ingest_cmd->add_option("--min-year", ingest_args.min_year, "accept years >= this");
    ingest_cmd->add_option("--max-year", ingest_args.max_year, "accept years <= this");
    ingest_cmd->add_option("--doc-type", ingest_args.doc_type,
                           "accepted doc_type (default: article)");
    ingest_cmd->add_option("--manifest", ingest_args.manifest, "run manifest JSON output");

    ComputeArgs compute_args;
    auto* compute_cmd =
        app.add_subcommand("compute", "compute indicator tables from a linked corpus");
    compute_cmd->fallthrough();
    compute_cmd->add_option("--corpus", compute_args.corpus, "linked corpus JSONL")->required();
    compute_cmd->add_option("--out-dir", compute_args.out_dir, "output directory")->required();
    compute_cmd->add_option("--metrics", compute_args.metrics,
                            "comma list of afyncc,afynrc,accfynrc,accfymucnrc,afymucnrc");
    compute_cmd->add_option("--base-years", compute_args.base_years,
                            "comma list; default: two earliest corpus years");
    compute_cmd->add_option("--countries", compute_args.countries,
                            "comma list of country codes to export");
    compute_cmd->add_flag("--include-na", compute_args.include_na,
                          "include the NA pseudo-country in exports");
    compute_cmd->add_option("--threads", compute_args.threads,
                            "worker threads (default: IMPACTIS_THREADS or all cores)");
    compute_cmd->add_option("--emit-bias-profile", compute_args.bias_profile,
                            "write the bias profile JSON here");
    compute_cmd->add_option("--manifest", compute_args.manifest,
                            "run manifest path (default: <out-dir>/run_manifest.json)");

    ReportArgs report_args;
    auto* report_cmd =
        app.add_subcommand("report", "summary table and SVG charts");
    report_cmd->fallthrough();
    report_cmd->add_option("--corpus", report_args.corpus, "linked corpus JSONL");
    report_cmd->add_option("--tables", report_args.tables, "indicator CSV files to chart")
        ->delimiter(',');
    report_cmd->add_option("--out-dir", report_args.out_dir, "output directory")->required();
    report_cmd->add_option("--countries", report_args.countries,
                           "comma list of country codes to chart");
    report_cmd->add_flag("--include-na", report_args.include_na,
                         "include the NA pseudo-country");
    report_cmd->add_option("--manifest", report_args.manifest,
                           "run manifest path (default: <out-dir>/run_manifest.json)");

    SynthArgs synth_args;
    auto* synth_cmd =
        app.add_subcommand("synth", "generate a synthetic corpus");
    synth_cmd->fallthrough();
    synth_cmd->add_option("--config", synth_args.config, "synth config JSON")->required();
    synth_cmd->add_option("--articles", synth_args.articles, "articles output")->required();
    synth_cmd->add_option("--readers", synth_args.readers, "readerships output")->required();
    synth_cmd->add_option("--manifest", synth_args.manifest, "run manifest JSON output");

    try {
        app.parse(argc, argv);
        if (ingest_cmd->parsed()) return cmd_ingest(ingest_args);
        if (compute_cmd->parsed()) return cmd_compute(compute_args);
        if (report_cmd->parsed()) return cmd_report(report_args);
        if (synth_cmd->parsed()) return cmd_synth(synth_args);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UserError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace impactis::cli
