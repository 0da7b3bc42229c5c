// scope: C/C++ function-level source normalization and dataset refinement.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "scope/analyzer.hpp"
#include "scope/corpus.hpp"
#include "scope/dedup.hpp"
#include "scope/lexer.hpp"
#include "scope/metrics.hpp"
#include "scope/pipeline.hpp"
#include "scope/transforms.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        return buffer.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw scope::CorpusError("cannot open input file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string escape(std::string_view text) {
    std::string out;
    for (const char c : text) {
        switch (c) {
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            case '\\': out += "\\\\"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\x%02x", static_cast<unsigned char>(c));
                    out += buf;
                } else {
                    out.push_back(c);
                }
        }
    }
    return out;
}

void add_transform_flags(CLI::App* cmd, scope::TransformConfig& config, std::string& output_mode) {
    cmd->add_flag("--no-comments,!--keep-comments", config.strip_comments,
                  "Remove comments (default on)");
    cmd->add_flag("--strings,!--no-strings", config.genericize_strings,
                  "Replace string literals with \"<STR>\" (default on)");
    cmd->add_flag("--rename,!--no-rename", config.rename_identifiers,
                  "Rename programmer-defined identifiers to FUNC_i/VAR_j (default on)");
    cmd->add_flag("--whitespace,!--no-whitespace", config.normalize_whitespace,
                  "Normalize whitespace to single spaces (default on)");
    cmd->add_option("--output", output_mode, "Output representation")
        ->check(CLI::IsMember({"text", "tokens"}))
        ->capture_default_str();
}

void add_analyze_flags(CLI::App* cmd, scope::AnalyzeOptions& options) {
    cmd->add_flag("--strip-directives", options.strip_directives,
                  "Delete preprocessor directives instead of marking the entry as an error");
    cmd->add_option("--garbage-fraction", options.garbage_fraction,
                    "Unknown-token fraction above which an entry is an error")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
}

scope::OutputMode parse_output_mode(const std::string& name) {
    return name == "tokens" ? scope::OutputMode::Tokens : scope::OutputMode::Text;
}

std::vector<scope::Label> read_labels(const std::filesystem::path& path) {
    // Either a corpus file (labels joined by entry id) or a plain list with
    // one 0/1 per line.
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw scope::CorpusError("cannot open label file: " + path.string());
    std::string first_line;
    std::getline(probe, first_line);
    probe.close();
    const bool plain = first_line.find('{') == std::string::npos;

    std::vector<scope::Label> labels;
    if (plain) {
        std::ifstream in(path, std::ios::binary);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto begin = line.find_first_not_of(" \t\r");
            if (begin == std::string::npos) continue;
            const auto end = line.find_last_not_of(" \t\r");
            const std::string word = line.substr(begin, end - begin + 1);
            if (word == "0") labels.push_back(scope::Label::NonVulnerable);
            else if (word == "1") labels.push_back(scope::Label::Vulnerable);
            else
                throw scope::CorpusError(path.string() + " line " + std::to_string(line_no) +
                                         ": expected 0 or 1, got '" + word + "'");
        }
        return labels;
    }
    scope::Corpus corpus = scope::read_corpus(path);
    std::sort(corpus.begin(), corpus.end(), [](const auto& a, const auto& b) {
        return scope::entry_id_less(a.entry.entry_id, b.entry.entry_id);
    });
    for (const scope::CorpusRecord& record : corpus) labels.push_back(record.entry.label);
    return labels;
}

int run_lex(const std::string& input) {
    const std::string source = read_input(input);
    for (const scope::Token& token : scope::tokenize(source)) {
        std::cout << scope::to_string(token.kind) << '\t' << token.span.begin << ".."
                  << token.span.end << '\t' << escape(token.text) << '\n';
    }
    return kExitOk;
}

int run_analyze(const std::string& input, const scope::AnalyzeOptions& options) {
    const std::string source = read_input(input);
    const scope::AnalysisResult result = scope::analyze(scope::tokenize(source), options);
    if (result.status.ok()) {
        std::cout << "status: ok\n";
    } else {
        std::cout << "status: error:" << scope::to_string(*result.status.error) << '\n';
    }
    const auto print = [](const char* heading, const std::vector<scope::NameOccurrences>& list) {
        std::cout << heading << " (" << list.size() << ")\n";
        for (const scope::NameOccurrences& name : list) {
            std::cout << "  " << name.name << ": " << name.occurrences.size() << " occurrence"
                      << (name.occurrences.size() == 1 ? "" : "s");
            for (const scope::Span& span : name.occurrences)
                std::cout << ' ' << span.begin << ".." << span.end;
            std::cout << '\n';
        }
    };
    print("functions", result.declarations.functions);
    print("variables", result.declarations.variables);
    return result.status.ok() ? kExitOk : kExitData;
}

int run_process_file(const std::string& input, const scope::TransformConfig& config,
                     const scope::AnalyzeOptions& analyze_options, const std::string& out_path) {
    const std::string source = read_input(input);
    const scope::ProcessedEntry entry =
        scope::process_function(source, config, input, analyze_options);
    if (!entry.status.ok()) {
        std::cerr << "error:" << scope::to_string(*entry.status.error) << '\n';
        return kExitData;
    }
    std::string text;
    if (config.output_mode == scope::OutputMode::Text) {
        text = entry.normalized_text;
        text.push_back('\n');
    } else {
        for (const std::string& token : entry.normalized_tokens) {
            text += token;
            text.push_back('\n');
        }
    }
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
        if (!out) throw scope::CorpusError("cannot open output file: " + out_path);
        out << text;
    }
    return kExitOk;
}

int run_process_corpus(const std::filesystem::path& corpus_path,
                       const scope::TransformConfig& config,
                       const scope::AnalyzeOptions& analyze_options,
                       const std::filesystem::path& out_path) {
    scope::Corpus corpus = scope::read_corpus(corpus_path);
    std::size_t errors = 0;
    for (scope::CorpusRecord& record : corpus) {
        record.processed = scope::process_function(record.entry.code, config,
                                                   record.entry.entry_id, analyze_options);
        if (!record.processed->status.ok()) ++errors;
    }
    scope::write_corpus(out_path, corpus);
    std::cout << "processed " << corpus.size() << " entries (" << errors << " errors) -> "
              << out_path.string() << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scope: C/C++ function-level source normalization and dataset refinement"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a configuration file");
    app.set_version_flag("--version", "scope 1.0.0");

    int exit_code = kExitOk;

    // lex -----------------------------------------------------------------
    auto* lex_cmd = app.add_subcommand("lex", "Print the token stream of a source file");
    static std::string lex_input;
    lex_cmd->add_option("file", lex_input, "Source file ('-' for stdin)")->required();
    lex_cmd->callback([&] { exit_code = run_lex(lex_input); });

    // analyze ---------------------------------------------------------------
    auto* analyze_cmd =
        app.add_subcommand("analyze", "Report declared names and parse status of a source file");
    static std::string analyze_input;
    static scope::AnalyzeOptions analyze_options;
    analyze_cmd->add_option("file", analyze_input, "Source file ('-' for stdin)")->required();
    add_analyze_flags(analyze_cmd, analyze_options);
    analyze_cmd->callback([&] { exit_code = run_analyze(analyze_input, analyze_options); });

    // process ---------------------------------------------------------------
    auto* process_cmd =
        app.add_subcommand("process", "Apply the selected transformations to one file or a corpus");
    static std::string process_input;
    static std::string process_corpus_path;
    static std::string process_out;
    static scope::TransformConfig process_config;
    static scope::AnalyzeOptions process_analyze;
    static std::string process_output_mode = "text";
    process_cmd->add_option("file", process_input, "Source file ('-' for stdin)");
    process_cmd->add_option("--corpus", process_corpus_path, "Process every entry of a corpus file");
    process_cmd->add_option("--out", process_out, "Output path (default stdout / required with --corpus)");
    add_transform_flags(process_cmd, process_config, process_output_mode);
    add_analyze_flags(process_cmd, process_analyze);
    process_cmd->callback([&] {
        process_config.output_mode = parse_output_mode(process_output_mode);
        if (process_corpus_path.empty() == process_input.empty())
            throw CLI::ValidationError("process", "give exactly one of <file> or --corpus");
        if (!process_corpus_path.empty()) {
            if (process_out.empty())
                throw CLI::ValidationError("process", "--corpus requires --out");
            exit_code = run_process_corpus(process_corpus_path, process_config, process_analyze,
                                           process_out);
        } else {
            exit_code =
                run_process_file(process_input, process_config, process_analyze, process_out);
        }
    });

    // extract ---------------------------------------------------------------
    auto* extract_cmd =
        app.add_subcommand("extract", "Extract C/C++ function entries from a CVEFixes database");
    static std::string extract_db;
    static std::string extract_out;
    extract_cmd->add_option("--db", extract_db, "SQLite database file")->required();
    extract_cmd->add_option("--out", extract_out, "Corpus output path")->required();
    extract_cmd->callback([&] {
        scope::IngestReport report;
        const std::vector<scope::FunctionEntry> entries =
            scope::ingest_database(extract_db, &report);
        scope::write_corpus(extract_out, entries);
        std::cout << "extracted " << report.rows << " entries (" << report.vulnerable
                  << " vulnerable, " << report.non_vulnerable << " non-vulnerable) -> "
                  << extract_out << '\n';
        for (const std::string& warning : report.warnings)
            std::cerr << "warning: " << warning << '\n';
    });

    // dedup -----------------------------------------------------------------
    auto* dedup_cmd =
        app.add_subcommand("dedup", "Group duplicate entries and write a resolution report");
    static std::string dedup_corpus;
    static std::string dedup_report_path;
    static std::string dedup_out;
    static scope::AnalyzeOptions dedup_analyze;
    dedup_cmd->add_option("--corpus", dedup_corpus, "Corpus file")->required();
    dedup_cmd->add_option("--report", dedup_report_path, "Report output path")->required();
    dedup_cmd->add_option("--out", dedup_out, "Write surviving entries to this corpus file");
    add_analyze_flags(dedup_cmd, dedup_analyze);
    dedup_cmd->callback([&] {
        scope::Corpus corpus = scope::read_corpus(dedup_corpus);
        scope::Corpus ok_subset;
        for (scope::CorpusRecord& record : corpus) {
            if (!record.processed) {
                record.processed = scope::process_function(record.entry.code, {},
                                                           record.entry.entry_id, dedup_analyze);
            }
            if (record.processed->status.ok()) ok_subset.push_back(record);
        }
        const std::vector<scope::DuplicateGroup> groups =
            scope::group_duplicates(ok_subset, dedup_analyze);
        const scope::DedupSummary summary = scope::summarize(corpus, groups);
        std::ofstream report(dedup_report_path, std::ios::binary | std::ios::trunc);
        if (!report)
            throw scope::CorpusError("cannot open report file: " + dedup_report_path);
        report << scope::dedup_report_json(summary, groups);
        if (!dedup_out.empty())
            scope::write_corpus(dedup_out, scope::remove_duplicates(ok_subset, groups));
        std::cout << "entries " << summary.total_entries << ", errors " << summary.error_entries
                  << ", groups " << summary.duplicate_groups << ", members "
                  << summary.duplicate_members << ", removed " << summary.duplicates_removed
                  << ", survivors " << summary.survivors << '\n';
    });

    // refine ------------------------------------------------------------
    auto* refine_cmd = app.add_subcommand(
        "refine", "Full pipeline: extract, process, dedup, balance, split, report");
    static scope::PipelineConfig pipeline_config;
    static std::string refine_db;
    static std::string refine_corpus;
    static std::string refine_out;
    static std::string refine_output_mode = "text";
    static std::vector<double> refine_ratios;
    refine_cmd->add_option("--db", refine_db, "SQLite database input");
    refine_cmd->add_option("--corpus", refine_corpus, "Corpus file input");
    refine_cmd->add_option("--out", refine_out, "Output directory")->required();
    refine_cmd->add_option("--seed", pipeline_config.seed, "Sampling seed")
        ->capture_default_str();
    refine_cmd->add_option("--ratios", refine_ratios, "Train/validation/test ratios")
        ->expected(3);
    add_transform_flags(refine_cmd, pipeline_config.transform, refine_output_mode);
    add_analyze_flags(refine_cmd, pipeline_config.analyze);
    refine_cmd->callback([&] {
        pipeline_config.transform.output_mode = parse_output_mode(refine_output_mode);
        pipeline_config.database = refine_db;
        pipeline_config.corpus = refine_corpus;
        pipeline_config.outdir = refine_out;
        if (!refine_ratios.empty())
            pipeline_config.ratios = {refine_ratios[0], refine_ratios[1], refine_ratios[2]};
        const scope::PipelineResult result = scope::run_pipeline(pipeline_config);
        std::cout << scope::format_provenance(result.provenance, result.dedup);
        std::cout << "train/validation/test   " << result.original.train.size() << '/'
                  << result.original.validation.size() << '/' << result.original.test.size()
                  << " per variant\n"
                  << "outputs under           " << refine_out << '\n';
    });

    // split -------------------------------------------------------------
    auto* split_cmd =
        app.add_subcommand("split", "Stratified train/validation/test split of a corpus");
    static std::string split_corpus;
    static std::string split_out;
    static std::uint64_t split_seed = 0;
    static std::vector<double> split_ratios;
    static bool split_balance = false;
    static std::string split_repr = "original";
    split_cmd->add_option("--corpus", split_corpus, "Corpus file")->required();
    split_cmd->add_option("--out", split_out, "Output directory")->required();
    split_cmd->add_option("--seed", split_seed, "Sampling seed")->capture_default_str();
    split_cmd->add_option("--ratios", split_ratios, "Train/validation/test ratios")->expected(3);
    split_cmd->add_flag("--balance", split_balance, "Balance classes before splitting");
    split_cmd->add_option("--representation", split_repr, "Record representation")
        ->check(CLI::IsMember({"original", "processed"}))
        ->capture_default_str();
    split_cmd->callback([&] {
        scope::Corpus corpus = scope::read_corpus(split_corpus);
        if (split_balance) corpus = scope::balance(corpus, split_seed);
        scope::SplitRatios ratios;
        if (!split_ratios.empty()) ratios = {split_ratios[0], split_ratios[1], split_ratios[2]};
        const scope::RepresentationMode mode = split_repr == "processed"
                                                   ? scope::RepresentationMode::ProcessedText
                                                   : scope::RepresentationMode::OriginalCode;
        const scope::DatasetBundle bundle = scope::split(corpus, ratios, split_seed, mode);
        const std::filesystem::path dir(split_out);
        std::filesystem::create_directories(dir);
        const auto emit = [&](const char* name,
                              const std::vector<scope::DatasetBundle::Record>& part) {
            std::vector<scope::FunctionEntry> entries;
            for (const auto& r : part)
                entries.push_back(scope::FunctionEntry{r.id, r.representation, r.label, {}});
            scope::write_corpus(dir / name, entries);
        };
        emit("train.jsonl", bundle.train);
        emit("validation.jsonl", bundle.validation);
        emit("test.jsonl", bundle.test);
        std::cout << "split " << corpus.size() << " entries into " << bundle.train.size() << '/'
                  << bundle.validation.size() << '/' << bundle.test.size() << " under "
                  << split_out << '\n';
    });

    // stats -------------------------------------------------------------
    auto* stats_cmd = app.add_subcommand("stats", "Token and vocabulary statistics of a corpus");
    static std::string stats_corpus;
    static std::string stats_json_out;
    stats_cmd->add_option("--corpus", stats_corpus, "Corpus file (processed)")->required();
    stats_cmd->add_option("--json", stats_json_out, "Also write the statistics as JSON");
    stats_cmd->callback([&] {
        scope::Corpus corpus = scope::read_corpus(stats_corpus);
        for (scope::CorpusRecord& record : corpus) {
            if (!record.processed)
                record.processed =
                    scope::process_function(record.entry.code, {}, record.entry.entry_id);
        }
        const scope::CorpusStats stats = scope::compute_stats(corpus);
        std::cout << "entries                 " << stats.entry_count << '\n'
                  << "errors                  " << stats.error_count << '\n'
                  << "mean raw tokens         " << stats.mean_raw_tokens << '\n'
                  << "mean processed tokens   " << stats.mean_processed_tokens << '\n'
                  << "raw vocabulary          " << stats.vocabulary_size_raw << '\n'
                  << "processed vocabulary    " << stats.vocabulary_size_processed << '\n';
        if (!stats_json_out.empty()) {
            std::ofstream out(stats_json_out, std::ios::binary | std::ios::trunc);
            if (!out) throw scope::CorpusError("cannot open JSON output: " + stats_json_out);
            out << scope::stats_json(stats);
        }
    });

    // metrics -----------------------------------------------------------
    auto* metrics_cmd =
        app.add_subcommand("metrics", "Classification metrics from gold and predicted labels");
    static std::string metrics_gold;
    static std::string metrics_pred;
    metrics_cmd->add_option("--gold", metrics_gold, "Gold labels (corpus or one 0/1 per line)")
        ->required();
    metrics_cmd->add_option("--pred", metrics_pred, "Predicted labels, aligned with gold")
        ->required();
    metrics_cmd->callback([&] {
        const std::vector<scope::Label> gold = read_labels(metrics_gold);
        const std::vector<scope::Label> predicted = read_labels(metrics_pred);
        std::cout << scope::format_report(scope::classification_metrics(gold, predicted));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return exit_code;
}
