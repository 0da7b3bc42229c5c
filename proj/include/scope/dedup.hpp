#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scope/corpus.hpp"

namespace scope {

/// Normalization depth at which two entries are compared.
enum class FingerprintLevel : std::uint8_t {
    Raw,                // L0: exact source bytes
    CommentWhitespace,  // L1: comments stripped, whitespace normalized
    Full,               // L2: full pipeline (comments, strings, rename, whitespace)
};

std::string_view to_string(FingerprintLevel level);

/// Equality witness for a normalized token sequence. Comparison uses the
/// retained sequence itself; the digest only labels groups in reports, so
/// the digest algorithm is not behavior-bearing.
struct Fingerprint {
    std::array<unsigned char, 32> digest{};
    std::string normalized;

    bool operator==(const Fingerprint& other) const { return normalized == other.normalized; }
    std::string hex() const;
};

enum class DuplicateCategory : std::uint8_t {
    IdenticalContent,  // all members equal at L0
    CommentOnly,       // all members equal at L1 but not L0
    RenameOnly,        // members only collapse at L2
};

std::string_view to_string(DuplicateCategory category);

/// The entries sharing one L2 fingerprint, the shallowest level at which
/// they all collapse, and the resolution outcome.
struct DuplicateGroup {
    Fingerprint fingerprint;  // L2
    std::vector<std::string> member_ids;
    DuplicateCategory category = DuplicateCategory::IdenticalContent;
    bool label_conflict = false;
    std::string kept_id;
    Label kept_label = Label::NonVulnerable;
};

/// Fingerprint one Ok-status record at the given level. Throws
/// std::invalid_argument for error-status or unprocessed records.
Fingerprint fingerprint(const CorpusRecord& record, FingerprintLevel level,
                        const AnalyzeOptions& analyze_options = {});

/// Group Ok-status records by equal L2 fingerprints (groups of size >= 2),
/// categorize each group, and resolve it: the kept entry is the member with
/// the smallest id among those carrying the preferred label, where the
/// preferred label is non-vulnerable as soon as any member is
/// non-vulnerable. The result is deterministic and invariant under input
/// permutation. Throws std::invalid_argument on error-status members or
/// duplicate ids.
std::vector<DuplicateGroup> group_duplicates(std::span<const CorpusRecord> records,
                                             const AnalyzeOptions& analyze_options = {});

/// The kept member of a resolved group.
const CorpusRecord& resolve(const DuplicateGroup& group, std::span<const CorpusRecord> records);

/// Records that survive deduplication: every non-member, plus each group's
/// kept entry. Sorted by entry id.
Corpus remove_duplicates(std::span<const CorpusRecord> records,
                         std::span<const DuplicateGroup> groups);

struct DedupSummary {
    std::size_t total_entries = 0;
    std::size_t error_entries = 0;
    std::size_t duplicate_groups = 0;
    std::size_t duplicate_members = 0;   // entries belonging to any group
    std::size_t duplicates_removed = 0;  // members minus kept entries
    std::size_t survivors = 0;
    std::size_t identical_content_groups = 0;
    std::size_t comment_only_groups = 0;
    std::size_t rename_only_groups = 0;
};

DedupSummary summarize(std::span<const CorpusRecord> all_records,
                       std::span<const DuplicateGroup> groups);

/// JSON report: one record per group (digest, members, category, conflict,
/// kept id) plus the summary block.
std::string dedup_report_json(const DedupSummary& summary, std::span<const DuplicateGroup> groups);

}  // namespace scope
