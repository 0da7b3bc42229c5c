#include "scope/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "scope/random.hpp"

namespace scope {

namespace {

void sort_by_id(Corpus& records) {
    std::sort(records.begin(), records.end(), [](const CorpusRecord& a, const CorpusRecord& b) {
        return entry_id_less(a.entry.entry_id, b.entry.entry_id);
    });
}

std::vector<std::size_t> indices_of(std::span<const CorpusRecord> records, Label label) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].entry.label == label) out.push_back(i);
    }
    std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
        return entry_id_less(records[a].entry.entry_id, records[b].entry.entry_id);
    });
    return out;
}

void check_ratios(const SplitRatios& ratios) {
    const double sum = ratios.train + ratios.validation + ratios.test;
    if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0 ||
        std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("split ratios must be non-negative and sum to 1");
    }
}

// Largest-remainder allocation of n into the three ratio shares; ties go to
// the earlier split. Every count stays within 1 of its exact share.
std::array<std::size_t, 3> allocate(std::size_t n, const SplitRatios& ratios) {
    const std::array<double, 3> shares = {ratios.train * static_cast<double>(n),
                                          ratios.validation * static_cast<double>(n),
                                          ratios.test * static_cast<double>(n)};
    std::array<std::size_t, 3> counts{};
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        counts[i] = static_cast<std::size_t>(std::floor(shares[i]));
        assigned += counts[i];
    }
    std::array<std::size_t, 3> order = {0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return shares[a] - std::floor(shares[a]) > shares[b] - std::floor(shares[b]);
    });
    for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts[order[k % 3]];
    return counts;
}

std::string representation_of(const CorpusRecord& record, RepresentationMode mode) {
    if (mode == RepresentationMode::OriginalCode) return record.entry.code;
    if (!record.processed || !record.processed->status.ok())
        throw CorpusError("entry '" + record.entry.entry_id +
                          "' has no processed representation");
    const ProcessedEntry& p = *record.processed;
    if (p.applied_config.output_mode == OutputMode::Text) return p.normalized_text;
    std::string joined;
    for (const std::string& tok : p.normalized_tokens) {
        if (!joined.empty()) joined.push_back(' ');
        joined += tok;
    }
    return joined;
}

std::vector<std::string> vocabulary(std::string_view text) {
    std::vector<std::string> words;
    for (const Token& t : tokenize(text)) {
        if (!is_trivia(t.kind)) words.push_back(t.text);
    }
    return words;
}

// Tracks everything run_pipeline writes, so a failing stage leaves no
// partial output tree behind.
class OutputTracker {
  public:
    ~OutputTracker() {
        if (!armed_) return;
        std::error_code ec;
        for (auto it = paths_.rbegin(); it != paths_.rend(); ++it)
            std::filesystem::remove(*it, ec);
        for (auto it = dirs_.rbegin(); it != dirs_.rend(); ++it) {
            if (std::filesystem::is_empty(*it, ec) && !ec) std::filesystem::remove(*it, ec);
        }
    }
    std::filesystem::path dir(const std::filesystem::path& d) {
        if (!std::filesystem::exists(d)) {
            std::filesystem::create_directories(d);
            dirs_.push_back(d);
        }
        return d;
    }
    std::filesystem::path file(const std::filesystem::path& p) {
        paths_.push_back(p);
        return p;
    }
    void disarm() { armed_ = false; }

  private:
    bool armed_ = true;
    std::vector<std::filesystem::path> paths_;
    std::vector<std::filesystem::path> dirs_;
};

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CorpusError("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out.flush()) throw CorpusError("failed while writing '" + path.string() + "'");
}

void write_bundle(OutputTracker& tracker, const std::filesystem::path& dir,
                  const DatasetBundle& bundle) {
    const auto materialize = [&](const char* name, const std::vector<DatasetBundle::Record>& part) {
        std::vector<FunctionEntry> entries;
        entries.reserve(part.size());
        for (const DatasetBundle::Record& r : part)
            entries.push_back(FunctionEntry{r.id, r.representation, r.label, {}});
        write_corpus(tracker.file(dir / name), entries);
    };
    tracker.dir(dir);
    materialize("train.jsonl", bundle.train);
    materialize("validation.jsonl", bundle.validation);
    materialize("test.jsonl", bundle.test);
}

}  // namespace

Corpus balance(std::span<const CorpusRecord> records, std::uint64_t seed) {
    std::vector<std::size_t> non_vulnerable = indices_of(records, Label::NonVulnerable);
    std::vector<std::size_t> vulnerable = indices_of(records, Label::Vulnerable);
    if (non_vulnerable.empty() || vulnerable.empty())
        throw CorpusError("cannot balance: one class is empty");

    auto& majority = non_vulnerable.size() >= vulnerable.size() ? non_vulnerable : vulnerable;
    auto& minority = non_vulnerable.size() >= vulnerable.size() ? vulnerable : non_vulnerable;
    std::mt19937_64 rng = stage_generator(seed, "balance");
    deterministic_shuffle(majority, rng);
    majority.resize(minority.size());

    Corpus out;
    out.reserve(2 * minority.size());
    for (const std::size_t i : minority) out.push_back(records[i]);
    for (const std::size_t i : majority) out.push_back(records[i]);
    sort_by_id(out);
    return out;
}

DatasetBundle split(std::span<const CorpusRecord> records, SplitRatios ratios,
                    std::uint64_t seed, RepresentationMode mode) {
    check_ratios(ratios);
    DatasetBundle bundle;
    bundle.seed = seed;
    bundle.ratios = ratios;

    for (const Label label : {Label::NonVulnerable, Label::Vulnerable}) {
        std::vector<std::size_t> members = indices_of(records, label);
        if (members.empty())
            throw CorpusError("cannot split: no entries labeled " +
                              std::to_string(to_int(label)));
        std::mt19937_64 rng = stage_generator(
            seed, label == Label::Vulnerable ? "split:vulnerable" : "split:non-vulnerable");
        deterministic_shuffle(members, rng);

        const std::array<std::size_t, 3> counts = allocate(members.size(), ratios);
        if (counts[0] == 0 || counts[1] == 0 || counts[2] == 0)
            throw CorpusError("class " + std::to_string(to_int(label)) +
                              " is too small to occupy every split");

        const std::array<std::vector<DatasetBundle::Record>*, 3> parts = {
            &bundle.train, &bundle.validation, &bundle.test};
        std::size_t offset = 0;
        for (std::size_t p = 0; p < 3; ++p) {
            for (std::size_t k = 0; k < counts[p]; ++k) {
                const CorpusRecord& record = records[members[offset + k]];
                parts[p]->push_back(DatasetBundle::Record{
                    record.entry.entry_id, representation_of(record, mode), label});
            }
            offset += counts[p];
        }
    }

    for (auto* part : {&bundle.train, &bundle.validation, &bundle.test}) {
        std::sort(part->begin(), part->end(),
                  [](const DatasetBundle::Record& a, const DatasetBundle::Record& b) {
                      return entry_id_less(a.id, b.id);
                  });
    }
    return bundle;
}

CorpusStats compute_stats(std::span<const CorpusRecord> records) {
    if (records.empty()) throw CorpusError("cannot compute statistics of an empty corpus");
    CorpusStats stats;
    stats.entry_count = records.size();

    std::set<std::string> raw_vocab;
    std::set<std::string> processed_vocab;
    std::size_t ok_count = 0;
    std::size_t raw_sum = 0;
    std::size_t processed_sum = 0;
    for (const CorpusRecord& record : records) {
        if (!record.processed) throw CorpusError("entry '" + record.entry.entry_id +
                                                 "' was never processed");
        if (!record.processed->status.ok()) {
            ++stats.error_count;
            continue;
        }
        ++ok_count;
        raw_sum += record.processed->raw_token_count;
        processed_sum += record.processed->processed_token_count;
        for (auto& word : vocabulary(record.entry.code)) raw_vocab.insert(std::move(word));
        if (record.processed->applied_config.output_mode == OutputMode::Tokens) {
            for (const auto& word : record.processed->normalized_tokens)
                processed_vocab.insert(word);
        } else {
            for (auto& word : vocabulary(record.processed->normalized_text))
                processed_vocab.insert(std::move(word));
        }
    }
    if (ok_count > 0) {
        stats.mean_raw_tokens = static_cast<double>(raw_sum) / static_cast<double>(ok_count);
        stats.mean_processed_tokens =
            static_cast<double>(processed_sum) / static_cast<double>(ok_count);
    }
    stats.vocabulary_size_raw = raw_vocab.size();
    stats.vocabulary_size_processed = processed_vocab.size();
    return stats;
}

std::string stats_json(const CorpusStats& stats) {
    nlohmann::ordered_json j;
    j["entry_count"] = stats.entry_count;
    j["error_count"] = stats.error_count;
    j["mean_raw_tokens"] = stats.mean_raw_tokens;
    j["mean_processed_tokens"] = stats.mean_processed_tokens;
    j["vocabulary_size_raw"] = stats.vocabulary_size_raw;
    j["vocabulary_size_processed"] = stats.vocabulary_size_processed;
    return j.dump(2);
}

PipelineResult run_pipeline(const PipelineConfig& config) {
    if (config.outdir.empty()) throw std::invalid_argument("output directory is required");
    if (config.database.empty() == config.corpus.empty())
        throw std::invalid_argument("exactly one of database / corpus input is required");

    PipelineResult result;
    OutputTracker tracker;
    tracker.dir(config.outdir);

    std::vector<FunctionEntry> entries;
    if (!config.database.empty()) {
        entries = ingest_database(config.database);
    } else {
        for (CorpusRecord& record : read_corpus(config.corpus))
            entries.push_back(std::move(record.entry));
    }
    result.provenance.extracted = entries.size();
    for (const FunctionEntry& entry : entries) {
        if (entry.label == Label::Vulnerable) ++result.provenance.extracted_vulnerable;
        else ++result.provenance.extracted_non_vulnerable;
    }

    Corpus processed;
    processed.reserve(entries.size());
    for (FunctionEntry& entry : entries) {
        CorpusRecord record;
        record.processed =
            process_function(entry.code, config.transform, entry.entry_id, config.analyze);
        record.entry = std::move(entry);
        if (record.processed->status.ok()) ++result.provenance.processed_ok;
        else ++result.provenance.errors;
        processed.push_back(std::move(record));
    }
    write_corpus(tracker.file(config.outdir / "processed.jsonl"), processed);

    Corpus ok_subset;
    for (const CorpusRecord& record : processed) {
        if (record.processed->status.ok()) ok_subset.push_back(record);
    }
    const std::vector<DuplicateGroup> groups = group_duplicates(ok_subset, config.analyze);
    result.dedup = summarize(processed, groups);
    result.provenance.duplicate_groups = result.dedup.duplicate_groups;
    result.provenance.duplicate_members = result.dedup.duplicate_members;
    result.provenance.duplicates_removed = result.dedup.duplicates_removed;
    write_text_file(tracker.file(config.outdir / "dedup_report.json"),
                    dedup_report_json(result.dedup, groups));

    const Corpus survivors = remove_duplicates(ok_subset, groups);
    result.provenance.survivors = survivors.size();
    for (const CorpusRecord& record : survivors) {
        if (record.entry.label == Label::Vulnerable) ++result.provenance.survivors_vulnerable;
    }
    write_corpus(tracker.file(config.outdir / "refined.jsonl"), survivors);

    result.stats = compute_stats(survivors);
    write_text_file(tracker.file(config.outdir / "stats.json"), stats_json(result.stats));

    const Corpus balanced = balance(survivors, config.seed);
    result.provenance.balanced = balanced.size();

    result.original = split(balanced, config.ratios, config.seed, RepresentationMode::OriginalCode);
    result.processed = split(balanced, config.ratios, config.seed, RepresentationMode::ProcessedText);
    write_bundle(tracker, config.outdir / "original", result.original);
    write_bundle(tracker, config.outdir / "processed", result.processed);

    write_text_file(tracker.file(config.outdir / "summary.txt"),
                    format_provenance(result.provenance, result.dedup));
    tracker.disarm();
    return result;
}

std::string format_provenance(const Provenance& provenance, const DedupSummary& dedup) {
    std::ostringstream out;
    out << "extracted entries      " << provenance.extracted << " (" << provenance.extracted_vulnerable
        << " vulnerable, " << provenance.extracted_non_vulnerable << " non-vulnerable)\n"
        << "processing errors      " << provenance.errors << '\n'
        << "processed ok           " << provenance.processed_ok << '\n'
        << "duplicate groups       " << provenance.duplicate_groups << " (identical "
        << dedup.identical_content_groups << ", comment-only " << dedup.comment_only_groups
        << ", rename-only " << dedup.rename_only_groups << ")\n"
        << "duplicate members      " << provenance.duplicate_members << '\n'
        << "duplicates removed     " << provenance.duplicates_removed << '\n'
        << "survivors              " << provenance.survivors << " ("
        << provenance.survivors_vulnerable << " vulnerable)\n"
        << "balanced corpus        " << provenance.balanced << '\n';
    return out.str();
}

}  // namespace scope
