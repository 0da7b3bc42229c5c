#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "scope/corpus.hpp"
#include "scope/dedup.hpp"

namespace scope {

struct SplitRatios {
    double train = 0.8;
    double validation = 0.1;
    double test = 0.1;
};

struct Provenance {
    std::size_t extracted = 0;
    std::size_t extracted_vulnerable = 0;
    std::size_t extracted_non_vulnerable = 0;
    std::size_t errors = 0;
    std::size_t processed_ok = 0;
    std::size_t duplicate_groups = 0;
    std::size_t duplicate_members = 0;
    std::size_t duplicates_removed = 0;
    std::size_t survivors = 0;
    std::size_t survivors_vulnerable = 0;
    std::size_t balanced = 0;
};

/// Stratified train/validation/test partitions over one representation.
struct DatasetBundle {
    struct Record {
        std::string id;
        std::string representation;
        Label label = Label::NonVulnerable;
    };
    std::vector<Record> train;
    std::vector<Record> validation;
    std::vector<Record> test;
    std::uint64_t seed = 0;
    SplitRatios ratios;
};

/// Down-sample the majority class uniformly at random (seeded) to the
/// minority count; result sorted by entry id. Throws CorpusError when a
/// class is empty.
Corpus balance(std::span<const CorpusRecord> records, std::uint64_t seed);

enum class RepresentationMode : std::uint8_t { OriginalCode, ProcessedText };

/// Per-class seeded shuffle, then contiguous slices with per-class counts
/// rounded by largest remainder. The id plan depends only on (ids, labels,
/// ratios, seed), so the two representation modes stay id-aligned. Throws
/// CorpusError when a class cannot occupy every split.
DatasetBundle split(std::span<const CorpusRecord> records, SplitRatios ratios,
                    std::uint64_t seed, RepresentationMode mode);

struct CorpusStats {
    std::size_t entry_count = 0;
    std::size_t error_count = 0;
    double mean_raw_tokens = 0.0;
    double mean_processed_tokens = 0.0;
    std::size_t vocabulary_size_raw = 0;        // distinct non-trivia token texts
    std::size_t vocabulary_size_processed = 0;
};

/// Means over Ok entries of the raw/processed token counts, plus the
/// distinct non-trivia vocabulary of each representation. Throws
/// CorpusError on an empty corpus.
CorpusStats compute_stats(std::span<const CorpusRecord> records);

std::string stats_json(const CorpusStats& stats);

struct PipelineConfig {
    std::filesystem::path database;  // one of database / corpus must be set
    std::filesystem::path corpus;
    std::filesystem::path outdir;
    TransformConfig transform;
    AnalyzeOptions analyze;
    std::uint64_t seed = 0;
    SplitRatios ratios;
};

struct PipelineResult {
    Provenance provenance;
    DatasetBundle original;
    DatasetBundle processed;
    DedupSummary dedup;
    CorpusStats stats;
};

/// End-to-end refinement: extract -> process -> error-mark -> dedup ->
/// balance -> split, emitting the refined corpus, the error-marked entries,
/// the dedup report, corpus statistics and both dataset variants (original
/// and processed representation) under outdir. Partial outputs are removed
/// on failure.
PipelineResult run_pipeline(const PipelineConfig& config);

std::string format_provenance(const Provenance& provenance, const DedupSummary& dedup);

}  // namespace scope
