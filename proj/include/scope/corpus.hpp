#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "scope/transforms.hpp"

namespace scope {

enum class Label : int { NonVulnerable = 0, Vulnerable = 1 };

inline int to_int(Label label) { return static_cast<int>(label); }
Label label_from_int(int value);

/// One raw corpus entry. Before-change code is labeled Vulnerable, the
/// fixed after-change version NonVulnerable. `language` comes from database
/// ingestion and is not persisted in corpus files.
struct FunctionEntry {
    std::string entry_id;
    std::string code;
    Label label = Label::NonVulnerable;
    std::string language;
};

/// A portable corpus line: the raw entry plus, once processed, its outcome.
struct CorpusRecord {
    FunctionEntry entry;
    std::optional<ProcessedEntry> processed;
};

using Corpus = std::vector<CorpusRecord>;

struct CorpusError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Ordering used everywhere an operation has to pick or sort "by entry id":
/// numeric when both ids are all digits, byte-wise otherwise.
bool entry_id_less(std::string_view a, std::string_view b);

struct IngestReport {
    std::size_t rows = 0;
    std::size_t vulnerable = 0;
    std::size_t non_vulnerable = 0;
    std::vector<std::string> warnings;
};

/// Extract C/C++ function-level entries from the upstream SQLite database:
/// create the join-column indexes if absent, run the method_change /
/// file_change join filtered to C and C++, and map before_change to the
/// label. Rows come back sorted by entry id. Throws CorpusError on a
/// missing file or schema; an empty result is a warning, not an error.
std::vector<FunctionEntry> ingest_database(const std::filesystem::path& db_path,
                                           IngestReport* report = nullptr);

/// Line-delimited records, one JSON object per line, fields: id, code,
/// label (0/1) and, for processed entries, status, normalized, raw_tokens,
/// proc_tokens. Malformed lines and duplicate ids raise CorpusError with
/// the line number.
Corpus read_corpus(const std::filesystem::path& path);

/// Atomic write (temp file + rename) of the same format.
void write_corpus(const std::filesystem::path& path, std::span<const CorpusRecord> records);
void write_corpus(const std::filesystem::path& path, std::span<const FunctionEntry> entries);

}  // namespace scope
