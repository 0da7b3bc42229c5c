#include "scope/dedup.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace scope {

namespace {

std::array<unsigned char, 32> sha256(std::string_view data) {
    std::array<unsigned char, 32> digest{};
    unsigned int written = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &written, EVP_sha256(), nullptr) != 1 ||
        written != digest.size()) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    return digest;
}

TransformConfig level_config(FingerprintLevel level) {
    TransformConfig config;  // full pipeline, text output
    config.output_mode = OutputMode::Text;
    if (level == FingerprintLevel::CommentWhitespace) {
        config.genericize_strings = false;
        config.rename_identifiers = false;
    }
    return config;
}

const ProcessedEntry& require_ok(const CorpusRecord& record) {
    if (!record.processed)
        throw std::invalid_argument("entry '" + record.entry.entry_id + "' was never processed");
    if (!record.processed->status.ok())
        throw std::invalid_argument("entry '" + record.entry.entry_id +
                                    "' has error status and cannot be fingerprinted");
    return *record.processed;
}

}  // namespace

std::string_view to_string(FingerprintLevel level) {
    switch (level) {
        case FingerprintLevel::Raw: return "raw";
        case FingerprintLevel::CommentWhitespace: return "comment_whitespace";
        case FingerprintLevel::Full: return "full";
    }
    return "unknown";
}

std::string_view to_string(DuplicateCategory category) {
    switch (category) {
        case DuplicateCategory::IdenticalContent: return "identical_content";
        case DuplicateCategory::CommentOnly: return "comment_only";
        case DuplicateCategory::RenameOnly: return "rename_only";
    }
    return "unknown";
}

std::string Fingerprint::hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(digest.size() * 2);
    for (const unsigned char byte : digest) {
        out.push_back(kDigits[byte >> 4]);
        out.push_back(kDigits[byte & 0xf]);
    }
    return out;
}

Fingerprint fingerprint(const CorpusRecord& record, FingerprintLevel level,
                        const AnalyzeOptions& analyze_options) {
    require_ok(record);
    Fingerprint fp;
    if (level == FingerprintLevel::Raw) {
        fp.normalized = record.entry.code;
    } else {
        // Always re-derive from the canonical configuration for the level, so
        // grouping does not depend on whatever configuration produced the
        // stored processed entry.
        const ProcessedEntry derived = process_function(record.entry.code, level_config(level),
                                                        record.entry.entry_id, analyze_options);
        if (!derived.status.ok())
            throw std::invalid_argument("entry '" + record.entry.entry_id +
                                        "' stopped normalizing at level " +
                                        std::string(to_string(level)));
        fp.normalized = derived.normalized_text;
    }
    fp.digest = sha256(fp.normalized);
    return fp;
}

std::vector<DuplicateGroup> group_duplicates(std::span<const CorpusRecord> records,
                                             const AnalyzeOptions& analyze_options) {
    std::unordered_set<std::string_view> ids;
    for (const CorpusRecord& record : records) {
        require_ok(record);
        if (!ids.insert(record.entry.entry_id).second)
            throw std::invalid_argument("duplicate entry id '" + record.entry.entry_id + "'");
    }

    std::unordered_map<std::string, std::vector<std::size_t>> by_l2;
    std::vector<Fingerprint> l2(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        l2[i] = fingerprint(records[i], FingerprintLevel::Full, analyze_options);
        by_l2[l2[i].normalized].push_back(i);
    }

    std::vector<DuplicateGroup> groups;
    for (auto& [text, members] : by_l2) {
        if (members.size() < 2) continue;
        std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            return entry_id_less(records[a].entry.entry_id, records[b].entry.entry_id);
        });

        DuplicateGroup group;
        group.fingerprint = l2[members.front()];
        for (const std::size_t m : members) group.member_ids.push_back(records[m].entry.entry_id);

        const auto all_equal_at = [&](FingerprintLevel level) {
            const Fingerprint first = fingerprint(records[members.front()], level, analyze_options);
            return std::all_of(members.begin() + 1, members.end(), [&](std::size_t m) {
                return fingerprint(records[m], level, analyze_options) == first;
            });
        };
        if (all_equal_at(FingerprintLevel::Raw)) {
            group.category = DuplicateCategory::IdenticalContent;
        } else if (all_equal_at(FingerprintLevel::CommentWhitespace)) {
            group.category = DuplicateCategory::CommentOnly;
        } else {
            group.category = DuplicateCategory::RenameOnly;
        }

        const bool any_non_vulnerable =
            std::any_of(members.begin(), members.end(), [&](std::size_t m) {
                return records[m].entry.label == Label::NonVulnerable;
            });
        const bool any_vulnerable = std::any_of(members.begin(), members.end(), [&](std::size_t m) {
            return records[m].entry.label == Label::Vulnerable;
        });
        group.label_conflict = any_non_vulnerable && any_vulnerable;
        group.kept_label = any_non_vulnerable ? Label::NonVulnerable : Label::Vulnerable;
        for (const std::size_t m : members) {  // members are id-sorted: first match wins
            if (records[m].entry.label == group.kept_label) {
                group.kept_id = records[m].entry.entry_id;
                break;
            }
        }
        groups.push_back(std::move(group));
    }

    std::sort(groups.begin(), groups.end(), [](const DuplicateGroup& a, const DuplicateGroup& b) {
        return entry_id_less(a.member_ids.front(), b.member_ids.front());
    });
    return groups;
}

const CorpusRecord& resolve(const DuplicateGroup& group, std::span<const CorpusRecord> records) {
    const auto it = std::find_if(records.begin(), records.end(), [&](const CorpusRecord& r) {
        return r.entry.entry_id == group.kept_id;
    });
    if (it == records.end())
        throw std::invalid_argument("kept entry '" + group.kept_id + "' not present");
    return *it;
}

Corpus remove_duplicates(std::span<const CorpusRecord> records,
                         std::span<const DuplicateGroup> groups) {
    std::unordered_set<std::string_view> removed;
    for (const DuplicateGroup& group : groups) {
        for (const std::string& id : group.member_ids) {
            if (id != group.kept_id) removed.insert(id);
        }
    }
    Corpus survivors;
    for (const CorpusRecord& record : records) {
        if (!removed.contains(record.entry.entry_id)) survivors.push_back(record);
    }
    std::sort(survivors.begin(), survivors.end(), [](const CorpusRecord& a, const CorpusRecord& b) {
        return entry_id_less(a.entry.entry_id, b.entry.entry_id);
    });
    return survivors;
}

DedupSummary summarize(std::span<const CorpusRecord> all_records,
                       std::span<const DuplicateGroup> groups) {
    DedupSummary summary;
    summary.total_entries = all_records.size();
    for (const CorpusRecord& record : all_records) {
        if (record.processed && !record.processed->status.ok()) ++summary.error_entries;
    }
    summary.duplicate_groups = groups.size();
    for (const DuplicateGroup& group : groups) {
        summary.duplicate_members += group.member_ids.size();
        summary.duplicates_removed += group.member_ids.size() - 1;
        switch (group.category) {
            case DuplicateCategory::IdenticalContent: ++summary.identical_content_groups; break;
            case DuplicateCategory::CommentOnly: ++summary.comment_only_groups; break;
            case DuplicateCategory::RenameOnly: ++summary.rename_only_groups; break;
        }
    }
    const std::size_t ok_entries = summary.total_entries - summary.error_entries;
    summary.survivors = ok_entries - summary.duplicates_removed;
    return summary;
}

std::string dedup_report_json(const DedupSummary& summary, std::span<const DuplicateGroup> groups) {
    nlohmann::ordered_json j;
    j["summary"] = {
        {"total_entries", summary.total_entries},
        {"error_entries", summary.error_entries},
        {"duplicate_groups", summary.duplicate_groups},
        {"duplicate_members", summary.duplicate_members},
        {"duplicates_removed", summary.duplicates_removed},
        {"survivors", summary.survivors},
        {"identical_content_groups", summary.identical_content_groups},
        {"comment_only_groups", summary.comment_only_groups},
        {"rename_only_groups", summary.rename_only_groups},
    };
    j["groups"] = nlohmann::ordered_json::array();
    for (const DuplicateGroup& group : groups) {
        nlohmann::ordered_json g;
        g["fingerprint"] = group.fingerprint.hex();
        g["members"] = group.member_ids;
        g["category"] = to_string(group.category);
        g["label_conflict"] = group.label_conflict;
        g["kept_id"] = group.kept_id;
        g["kept_label"] = to_int(group.kept_label);
        j["groups"].push_back(std::move(g));
    }
    return j.dump(2);
}

}  // namespace scope
