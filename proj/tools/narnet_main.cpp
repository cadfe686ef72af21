// narnet: dynamic conversational character networks from speaker-labeled
// scene annotations. File-based pipeline: ingest -> infer -> build -> series,
// plus direct and network-level evaluation against ground-truth labels.

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "narnet/evaluation.hpp"
#include "narnet/exports.hpp"
#include "narnet/srt.hpp"

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;
constexpr int kExitUnknownName = 3;

struct CliError : std::runtime_error {
    int code;
    CliError(int code, const std::string& message) : std::runtime_error(message), code(code) {}
};

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError(kExitData, "cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError(kExitData, "cannot write '" + path.string() + "'");
    out << content;
}

void report(const std::vector<narnet::Diagnostic>& diagnostics) {
    for (const auto& d : diagnostics) std::cerr << d.str() << "\n";
}

narnet::Corpus load_corpus(const std::string& path) {
    auto result = narnet::parse_canonical(path);
    report(result.diagnostics);
    if (!result.ok()) throw CliError(kExitData, "failed to parse corpus '" + path + "'");
    return std::move(*result.corpus);
}

std::vector<std::vector<narnet::AddresseeHypothesis>> load_hypotheses(
    const std::string& path, const narnet::Corpus& corpus) {
    std::vector<narnet::Diagnostic> diagnostics;
    auto result = narnet::hypotheses_from_tsv(read_file(path), corpus, path, diagnostics);
    report(diagnostics);
    if (!result) throw CliError(kExitData, "failed to parse hypotheses '" + path + "'");
    return std::move(*result);
}

narnet::Ruleset ruleset_or_die(const std::string& token) {
    auto ruleset = narnet::parse_ruleset(token);
    if (!ruleset)
        throw CliError(kExitUsage,
                       "invalid ruleset '" + token + "' (expected 1, 12, 123, or 1234)");
    return *ruleset;
}

// Case-insensitive prefix/substring ranking, alphabetical tie-break.
std::vector<std::string> closest_names(const std::string& query,
                                       const std::vector<std::string>& candidates) {
    auto lower = [](std::string s) {
        for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    };
    std::string q = lower(query);
    std::vector<std::pair<long, std::string>> ranked;
    for (const auto& name : candidates) {
        std::string c = lower(name);
        std::size_t prefix = 0;
        while (prefix < q.size() && prefix < c.size() && q[prefix] == c[prefix]) ++prefix;
        long score = static_cast<long>(prefix) * 10;
        if (!q.empty() && c.find(q) != std::string::npos) score += 5;
        ranked.emplace_back(-score, name);
    }
    std::sort(ranked.begin(), ranked.end());
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ranked.size() && i < 5; ++i) out.push_back(ranked[i].second);
    return out;
}

[[noreturn]] void unknown_name(const std::string& name,
                               const std::vector<std::string>& candidates) {
    std::string message = "unknown character '" + name + "'";
    auto close = closest_names(name, candidates);
    if (!close.empty()) {
        message += "; closest matches:";
        for (const auto& c : close) message += " " + c;
    }
    throw CliError(kExitUnknownName, message);
}

struct IngestArgs {
    std::vector<std::string> inputs;
    std::string format = "canonical";
    std::string scenes;
    std::string output;
};

int run_ingest(const IngestArgs& args) {
    narnet::ParseResult result;
    if (args.format == "srt") {
        if (args.scenes.empty())
            throw CliError(kExitUsage, "ingest --format srt requires --scenes <sidecar>");
        std::vector<std::filesystem::path> files(args.inputs.begin(), args.inputs.end());
        result = narnet::parse_srt(files, args.scenes);
    } else {
        if (args.inputs.size() != 1)
            throw CliError(kExitUsage, "canonical ingest takes exactly one input file");
        result = narnet::parse_canonical(args.inputs.front());
    }
    report(result.diagnostics);
    if (!result.ok()) return kExitData;
    write_file(args.output, narnet::serialize_corpus(*result.corpus));
    std::cout << narnet::format_stats(narnet::corpus_stats(*result.corpus));
    return 0;
}

struct InferArgs {
    std::string corpus;
    std::string rules;
    std::string hyps_out;
    std::string interactions_out;
};

int run_infer(const InferArgs& args) {
    narnet::Ruleset ruleset = ruleset_or_die(args.rules);
    narnet::Corpus corpus = load_corpus(args.corpus);
    auto hypotheses = narnet::infer_corpus(corpus, ruleset);
    if (!args.hyps_out.empty())
        write_file(args.hyps_out, narnet::hypotheses_to_tsv(hypotheses));
    if (!args.interactions_out.empty()) {
        std::vector<narnet::DirectedInteraction> rows;
        for (const auto& scene : corpus.scenes) {
            auto scene_rows = narnet::directed_interactions(
                scene, hypotheses[static_cast<std::size_t>(scene.index - 1)]);
            rows.insert(rows.end(), scene_rows.begin(), scene_rows.end());
        }
        write_file(args.interactions_out, narnet::interactions_to_csv(rows));
    }
    std::cout << "coverage=" << narnet::fmt_num(narnet::coverage(corpus, hypotheses)) << "\n";
    return 0;
}

struct BuildArgs {
    std::string corpus;
    std::string hyps;
    std::string output;
    std::string gexf;
    int window = 0;
    int stride = 1;
    double lambda = 0.01;
};

int run_build(const std::string& method, const BuildArgs& args) {
    narnet::Corpus corpus = load_corpus(args.corpus);
    auto hypotheses = load_hypotheses(args.hyps, corpus);
    auto timeline = narnet::interactions_from_hypotheses(corpus, hypotheses);

    narnet::DynamicGraphSeries series;
    if (method == "cumulative") {
        series = narnet::build_cumulative_prefix_series(timeline);
    } else if (method == "slice") {
        series = narnet::build_time_slice_series(timeline, args.window, args.stride);
    } else {
        series = narnet::build_smoothed_series(timeline, {args.lambda});
    }
    write_file(args.output, narnet::series_to_csv(series));
    if (!args.gexf.empty()) write_file(args.gexf, narnet::to_gexf(series));
    return 0;
}

struct SeriesArgs {
    std::string series;
    std::string corpus;
    std::string who;
    std::string pair;
    std::string output;
};

int run_series(bool strength, const SeriesArgs& args) {
    narnet::Corpus corpus = load_corpus(args.corpus);
    std::vector<narnet::Diagnostic> diagnostics;
    auto series = narnet::series_from_csv(read_file(args.series), args.series, diagnostics);
    report(diagnostics);
    if (!series) return kExitData;

    std::set<narnet::SpeakerId> all(corpus.speakers);
    if (!series->snapshots.empty()) {
        const auto& nodes = series->snapshots.front().graph.nodes;
        all.insert(nodes.begin(), nodes.end());
    }
    std::vector<narnet::SpeakerId> universe(all.begin(), all.end());
    for (auto& snapshot : series->snapshots) snapshot.graph.nodes = universe;

    std::vector<std::pair<int, double>> values;
    if (strength) {
        if (!all.count(args.who)) unknown_name(args.who, universe);
        values = narnet::node_strength_series(*series, args.who);
    } else {
        auto parts = narnet::split(args.pair, ',');
        if (parts.size() != 2 || narnet::trim(parts[0]).empty() ||
            narnet::trim(parts[1]).empty() || narnet::trim(parts[0]) == narnet::trim(parts[1]))
            throw CliError(kExitUsage, "--pair expects two distinct names, e.g. --pair A,B");
        std::string a = narnet::trim(parts[0]), b = narnet::trim(parts[1]);
        if (!all.count(a)) unknown_name(a, universe);
        if (!all.count(b)) unknown_name(b, universe);
        values = narnet::link_weight_series(*series, narnet::PairKey(a, b));
    }
    std::string csv = narnet::scene_values_to_csv(values);
    if (args.output.empty()) {
        std::cout << csv;
    } else {
        write_file(args.output, csv);
    }
    return 0;
}

struct EvalArgs {
    std::string corpus;
    std::string rules;
    std::string csv;
    bool drop_boundary = false;
};

std::vector<narnet::Ruleset> rulesets_for(const std::string& token) {
    if (!token.empty()) return {ruleset_or_die(token)};
    return {narnet::Ruleset::Rules1, narnet::Ruleset::Rules12, narnet::Ruleset::Rules123,
            narnet::Ruleset::Rules1234};
}

void require_annotations(const narnet::Corpus& corpus) {
    for (const auto& scene : corpus.scenes)
        for (const auto& utt : scene.utterances)
            if (utt.truth_addressees) return;
    throw CliError(kExitData, "corpus carries no ground-truth addressees");
}

int run_eval_direct(const EvalArgs& args) {
    narnet::Corpus corpus = load_corpus(args.corpus);
    require_annotations(corpus);
    std::ostringstream csv;
    csv << "ruleset,coverage,fscore,precision,recall,monologue_accuracy\n";
    std::cout << std::left << std::setw(9) << "ruleset" << std::setw(10) << "coverage"
              << std::setw(10) << "fscore" << std::setw(11) << "precision" << std::setw(8)
              << "recall" << "monologue_acc\n";
    for (auto ruleset : rulesets_for(args.rules)) {
        auto hypotheses = narnet::infer_corpus(corpus, ruleset);
        double cov = narnet::coverage(corpus, hypotheses);
        auto labeled = narnet::build_labeled_set(corpus, hypotheses, true);
        auto scores = narnet::multilabel_scores(labeled);
        double mono = scores.monologue_items == 0
                          ? 1.0
                          : static_cast<double>(scores.monologue_correct) /
                                static_cast<double>(scores.monologue_items);
        std::cout << std::left << std::setw(9) << narnet::ruleset_label(ruleset) << std::setw(10)
                  << narnet::fmt_num(cov) << std::setw(10) << narnet::fmt_num(scores.fscore)
                  << std::setw(11) << narnet::fmt_num(scores.precision) << std::setw(8)
                  << narnet::fmt_num(scores.recall) << narnet::fmt_num(mono) << "\n";
        csv << narnet::ruleset_label(ruleset) << ',' << narnet::fmt_num(cov) << ','
            << narnet::fmt_num(scores.fscore) << ',' << narnet::fmt_num(scores.precision) << ','
            << narnet::fmt_num(scores.recall) << ',' << narnet::fmt_num(mono) << "\n";
    }
    if (!args.csv.empty()) write_file(args.csv, csv.str());
    return 0;
}

int run_eval_network(const EvalArgs& args) {
    narnet::Corpus corpus = load_corpus(args.corpus);
    require_annotations(corpus);
    std::vector<narnet::EvalVariant> variants;
    if (args.drop_boundary) {
        variants = {narnet::EvalVariant::DropSceneBoundary};
    } else {
        variants = {narnet::EvalVariant::AllUtterances,
                    narnet::EvalVariant::DropSceneBoundary};
    }
    auto show = [](const std::optional<double>& v) {
        return v ? narnet::fmt_num(*v) : std::string("undefined");
    };
    std::ostringstream csv;
    csv << "ruleset,variant,jaccard,cosine,l2\n";
    std::cout << std::left << std::setw(9) << "ruleset" << std::setw(16) << "variant"
              << std::setw(9) << "jaccard" << std::setw(9) << "cosine" << "l2\n";
    for (auto ruleset : rulesets_for(args.rules)) {
        for (auto variant : variants) {
            auto reportv = narnet::compare_networks(corpus, ruleset, variant);
            std::cout << std::left << std::setw(9) << narnet::ruleset_label(ruleset)
                      << std::setw(16) << narnet::variant_label(variant) << std::setw(9)
                      << narnet::fmt_num(reportv.jaccard) << std::setw(9) << show(reportv.cosine)
                      << show(reportv.l2) << "\n";
            csv << narnet::ruleset_label(ruleset) << ',' << narnet::variant_label(variant) << ','
                << narnet::fmt_num(reportv.jaccard) << ',' << show(reportv.cosine) << ','
                << show(reportv.l2) << "\n";
        }
    }
    if (!args.csv.empty()) write_file(args.csv, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic conversational character networks"};
    app.require_subcommand(1);

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "parse annotations into the corpus format");
    ingest->add_option("inputs", ingest_args.inputs, "input file(s)")->required();
    ingest->add_option("--format", ingest_args.format, "canonical or srt")
        ->check(CLI::IsMember({"canonical", "srt"}));
    ingest->add_option("--scenes", ingest_args.scenes, "scene sidecar (srt format)");
    ingest->add_option("-o,--output", ingest_args.output, "corpus output path")->required();

    InferArgs infer_args;
    auto* infer = app.add_subcommand("infer", "infer addressees with a nested ruleset");
    infer->add_option("corpus", infer_args.corpus, "corpus file")->required();
    infer->add_option("--rules", infer_args.rules, "1, 12, 123, or 1234")->required();
    infer->add_option("-o,--hyps", infer_args.hyps_out, "hypotheses output path");
    infer->add_option("--interactions", infer_args.interactions_out,
                      "directed interaction CSV output path");

    BuildArgs build_args;
    auto* build = app.add_subcommand("build", "build a graph series from hypotheses");
    build->require_subcommand(1);
    auto* build_cumulative = build->add_subcommand("cumulative", "prefix-cumulative series");
    auto* build_slice = build->add_subcommand("slice", "trailing-window series");
    build_slice->add_option("--window", build_args.window, "window size in scenes")
        ->required()
        ->check(CLI::PositiveNumber);
    build_slice->add_option("--stride", build_args.stride, "snapshot stride")
        ->check(CLI::PositiveNumber);
    auto* build_smooth = build->add_subcommand("smooth", "narrative-smoothed series");
    build_smooth->add_option("--lambda", build_args.lambda, "sigmoid steepness")
        ->check(CLI::PositiveNumber);
    for (auto* sub : {build_cumulative, build_slice, build_smooth}) {
        sub->add_option("--corpus", build_args.corpus, "corpus file")->required();
        sub->add_option("--hyps", build_args.hyps, "hypotheses file")->required();
        sub->add_option("-o,--output", build_args.output, "series CSV output path")->required();
        sub->add_option("--gexf", build_args.gexf, "GEXF output path");
    }

    SeriesArgs series_args;
    auto* series = app.add_subcommand("series", "extract trajectories from a built series");
    series->require_subcommand(1);
    auto* series_strength = series->add_subcommand("strength", "per-scene node strength");
    series_strength->add_option("--who", series_args.who, "character name")->required();
    auto* series_link = series->add_subcommand("link", "per-scene link weight");
    series_link->add_option("--pair", series_args.pair, "two names: A,B")->required();
    for (auto* sub : {series_strength, series_link}) {
        sub->add_option("--series", series_args.series, "series CSV from build")->required();
        sub->add_option("--corpus", series_args.corpus, "corpus file")->required();
        sub->add_option("-o,--output", series_args.output, "output CSV (default stdout)");
    }

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "score inference against ground truth");
    eval->require_subcommand(1);
    auto* eval_direct = eval->add_subcommand("direct", "per-utterance addressee scores");
    auto* eval_network = eval->add_subcommand("network", "cumulative network similarity");
    eval_network->add_flag("--drop-boundary", eval_args.drop_boundary,
                           "drop each scene's first and last utterance");
    for (auto* sub : {eval_direct, eval_network}) {
        sub->add_option("corpus", eval_args.corpus, "corpus file")->required();
        sub->add_option("--rules", eval_args.rules, "restrict to one ruleset");
        sub->add_option("--csv", eval_args.csv, "write the table as CSV");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (ingest->parsed()) return run_ingest(ingest_args);
        if (infer->parsed()) return run_infer(infer_args);
        if (build->parsed()) {
            if (build_cumulative->parsed()) return run_build("cumulative", build_args);
            if (build_slice->parsed()) return run_build("slice", build_args);
            return run_build("smooth", build_args);
        }
        if (series->parsed()) return run_series(series_strength->parsed(), series_args);
        if (eval->parsed())
            return eval_direct->parsed() ? run_eval_direct(eval_args)
                                         : run_eval_network(eval_args);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
