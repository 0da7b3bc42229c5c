#include "scope/corpus.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace scope {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Database {
    sqlite3* handle = nullptr;
    ~Database() {
        if (handle) sqlite3_close(handle);
    }
};

struct Statement {
    sqlite3_stmt* handle = nullptr;
    ~Statement() {
        if (handle) sqlite3_finalize(handle);
    }
};

Statement prepare(sqlite3* db, const char* sql) {
    Statement stmt;
    if (sqlite3_prepare_v2(db, sql, -1, &stmt.handle, nullptr) != SQLITE_OK) {
        throw CorpusError(std::string("failed to prepare query: ") + sqlite3_errmsg(db));
    }
    return stmt;
}

std::string column_text(sqlite3_stmt* stmt, int col) {
    const unsigned char* text = sqlite3_column_text(stmt, col);
    if (!text) return {};
    const int bytes = sqlite3_column_bytes(stmt, col);
    return std::string(reinterpret_cast<const char*>(text), static_cast<std::size_t>(bytes));
}

void require_columns(sqlite3* db, const char* table, std::initializer_list<const char*> columns) {
    const std::string sql = std::string("PRAGMA table_info(") + table + ")";
    Statement stmt = prepare(db, sql.c_str());
    std::unordered_set<std::string> present;
    while (sqlite3_step(stmt.handle) == SQLITE_ROW) present.insert(column_text(stmt.handle, 1));
    if (present.empty()) throw CorpusError(std::string("missing table '") + table + "'");
    for (const char* col : columns) {
        if (!present.contains(col))
            throw CorpusError(std::string("table '") + table + "' is missing column '" + col + "'");
    }
}

// The upstream schema stores before_change as the strings 'True'/'False';
// integer booleans are accepted for schema drift across versions.
std::optional<Label> parse_before_change(sqlite3_stmt* stmt, int col) {
    if (sqlite3_column_type(stmt, col) == SQLITE_INTEGER) {
        const auto v = sqlite3_column_int64(stmt, col);
        if (v == 0) return Label::NonVulnerable;
        if (v == 1) return Label::Vulnerable;
        return std::nullopt;
    }
    std::string text = column_text(stmt, col);
    std::transform(text.begin(), text.end(), text.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (text == "true" || text == "1") return Label::Vulnerable;
    if (text == "false" || text == "0") return Label::NonVulnerable;
    return std::nullopt;
}

std::string status_string(const ParseStatus& status) {
    if (status.ok()) return "ok";
    return std::string("error:") + std::string(to_string(*status.error));
}

ordered_json record_json(const FunctionEntry& entry, const ProcessedEntry* processed) {
    ordered_json j;
    j["id"] = entry.entry_id;
    j["code"] = entry.code;
    j["label"] = to_int(entry.label);
    if (processed) {
        j["status"] = status_string(processed->status);
        if (processed->status.ok()) {
            if (processed->applied_config.output_mode == OutputMode::Text)
                j["normalized"] = processed->normalized_text;
            else
                j["normalized"] = processed->normalized_tokens;
            j["proc_tokens"] = processed->processed_token_count;
        }
        j["raw_tokens"] = processed->raw_token_count;
    }
    return j;
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
    if (path.empty()) throw CorpusError("empty corpus path");
    const std::filesystem::path dir = path.parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
    std::filesystem::path temp = path;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw CorpusError("cannot open '" + temp.string() + "' for writing");
        for (const std::string& line : lines) out << line << '\n';
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(temp, ec);
            throw CorpusError("failed while writing '" + temp.string() + "'");
        }
    }
    std::filesystem::rename(temp, path);
}

std::string dump(const ordered_json& j) {
    // Mixed-encoding source survives as U+FFFD rather than aborting the write.
    return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

[[noreturn]] void line_error(std::size_t line_no, const std::string& what) {
    throw CorpusError("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Label label_from_int(int value) {
    if (value == 0) return Label::NonVulnerable;
    if (value == 1) return Label::Vulnerable;
    throw CorpusError("label must be 0 or 1, got " + std::to_string(value));
}

bool entry_id_less(std::string_view a, std::string_view b) {
    const auto all_digits = [](std::string_view s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
            return std::isdigit(c) != 0;
        });
    };
    if (all_digits(a) && all_digits(b)) {
        const auto strip = [](std::string_view s) {
            const std::size_t i = s.find_first_not_of('0');
            return i == std::string_view::npos ? s.substr(s.size() - 1) : s.substr(i);
        };
        const std::string_view sa = strip(a), sb = strip(b);
        if (sa.size() != sb.size()) return sa.size() < sb.size();
        if (sa != sb) return sa < sb;
        return a < b;  // equal values: shorter (fewer leading zeros) first
    }
    return a < b;
}

std::vector<FunctionEntry> ingest_database(const std::filesystem::path& db_path,
                                           IngestReport* report) {
    IngestReport local;
    IngestReport& rep = report ? *report : local;

    if (!std::filesystem::exists(db_path))
        throw CorpusError("database file not found: " + db_path.string());

    Database db;
    bool read_only = false;
    if (sqlite3_open_v2(db_path.string().c_str(), &db.handle, SQLITE_OPEN_READWRITE, nullptr) !=
        SQLITE_OK) {
        if (db.handle) sqlite3_close(db.handle);
        db.handle = nullptr;
        if (sqlite3_open_v2(db_path.string().c_str(), &db.handle, SQLITE_OPEN_READONLY, nullptr) !=
            SQLITE_OK) {
            const std::string msg = db.handle ? sqlite3_errmsg(db.handle) : "unknown error";
            throw CorpusError("cannot open database '" + db_path.string() + "': " + msg);
        }
        read_only = true;
    }

    require_columns(db.handle, "method_change",
                    {"method_change_id", "code", "before_change", "file_change_id"});
    require_columns(db.handle, "file_change", {"file_change_id", "programming_language"});

    // Mirrors the upstream preparation step: index the join columns so the
    // extraction query stays fast on the full database.
    for (const char* ddl :
         {"CREATE INDEX IF NOT EXISTS idx_method_change_file_change_id ON "
          "method_change(file_change_id)",
          "CREATE INDEX IF NOT EXISTS idx_file_change_file_change_id ON "
          "file_change(file_change_id)"}) {
        if (read_only) {
            rep.warnings.push_back("read-only database: skipped index creation");
            break;
        }
        char* err = nullptr;
        if (sqlite3_exec(db.handle, ddl, nullptr, nullptr, &err) != SQLITE_OK) {
            rep.warnings.push_back(std::string("index creation failed: ") +
                                   (err ? err : "unknown error"));
            sqlite3_free(err);
        }
    }

    Statement stmt = prepare(
        db.handle,
        "SELECT method_change.method_change_id, method_change.code, "
        "method_change.before_change, file_change.programming_language "
        "FROM method_change "
        "INNER JOIN file_change ON method_change.file_change_id = file_change.file_change_id "
        "WHERE programming_language = 'C' OR programming_language = 'C++'");

    std::vector<FunctionEntry> entries;
    int rc;
    while ((rc = sqlite3_step(stmt.handle)) == SQLITE_ROW) {
        FunctionEntry entry;
        entry.entry_id = column_text(stmt.handle, 0);
        entry.code = column_text(stmt.handle, 1);
        const std::optional<Label> label = parse_before_change(stmt.handle, 2);
        entry.language = column_text(stmt.handle, 3);
        if (!label) {
            rep.warnings.push_back("row " + entry.entry_id +
                                   ": unrecognized before_change value, skipped");
            continue;
        }
        entry.label = *label;
        entries.push_back(std::move(entry));
    }
    if (rc != SQLITE_DONE)
        throw CorpusError(std::string("query failed: ") + sqlite3_errmsg(db.handle));

    std::stable_sort(entries.begin(), entries.end(),
                     [](const FunctionEntry& a, const FunctionEntry& b) {
                         return entry_id_less(a.entry_id, b.entry_id);
                     });
    std::unordered_set<std::string> seen;
    std::vector<FunctionEntry> unique;
    unique.reserve(entries.size());
    for (FunctionEntry& entry : entries) {
        if (!seen.insert(entry.entry_id).second) {
            rep.warnings.push_back("duplicate method_change_id " + entry.entry_id +
                                   ": kept first row");
            continue;
        }
        unique.push_back(std::move(entry));
    }

    rep.rows = unique.size();
    for (const FunctionEntry& entry : unique) {
        if (entry.label == Label::Vulnerable) ++rep.vulnerable;
        else ++rep.non_vulnerable;
    }
    if (unique.empty()) rep.warnings.push_back("query returned zero C/C++ rows");
    return unique;
}

Corpus read_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open corpus file: " + path.string());

    Corpus corpus;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            line_error(line_no, std::string("malformed record: ") + e.what());
        }
        if (!j.is_object()) line_error(line_no, "record is not an object");

        CorpusRecord record;
        try {
            if (!j.contains("id") || !j.contains("code") || !j.contains("label"))
                line_error(line_no, "record needs id, code and label fields");
            if (j["id"].is_string()) record.entry.entry_id = j["id"].get<std::string>();
            else if (j["id"].is_number_integer())
                record.entry.entry_id = std::to_string(j["id"].get<long long>());
            else
                line_error(line_no, "id must be a string or integer");
            record.entry.code = j["code"].get<std::string>();
            record.entry.label = label_from_int(j["label"].get<int>());

            if (j.contains("status")) {
                ProcessedEntry processed;
                processed.entry_id = record.entry.entry_id;
                const std::string status = j["status"].get<std::string>();
                if (status != "ok") {
                    constexpr std::string_view kPrefix = "error:";
                    if (!status.starts_with(kPrefix))
                        line_error(line_no, "status must be \"ok\" or \"error:<reason>\"");
                    const auto reason =
                        parse_error_from_string(std::string_view(status).substr(kPrefix.size()));
                    if (!reason) line_error(line_no, "unknown error reason in '" + status + "'");
                    processed.status.error = *reason;
                }
                if (j.contains("normalized")) {
                    if (!processed.status.ok())
                        line_error(line_no, "error entries cannot carry normalized output");
                    if (j["normalized"].is_array()) {
                        processed.normalized_tokens =
                            j["normalized"].get<std::vector<std::string>>();
                        processed.applied_config.output_mode = OutputMode::Tokens;
                    } else {
                        processed.normalized_text = j["normalized"].get<std::string>();
                        processed.applied_config.output_mode = OutputMode::Text;
                    }
                } else if (processed.status.ok()) {
                    line_error(line_no, "ok entries must carry normalized output");
                }
                if (j.contains("raw_tokens"))
                    processed.raw_token_count = j["raw_tokens"].get<std::size_t>();
                if (j.contains("proc_tokens"))
                    processed.processed_token_count = j["proc_tokens"].get<std::size_t>();
                record.processed = std::move(processed);
            }
        } catch (const nlohmann::json::exception& e) {
            line_error(line_no, std::string("bad field: ") + e.what());
        }

        if (!seen.insert(record.entry.entry_id).second)
            line_error(line_no, "duplicate entry id '" + record.entry.entry_id + "'");
        corpus.push_back(std::move(record));
    }
    return corpus;
}

void write_corpus(const std::filesystem::path& path, std::span<const CorpusRecord> records) {
    std::vector<std::string> lines;
    lines.reserve(records.size());
    for (const CorpusRecord& record : records) {
        lines.push_back(
            dump(record_json(record.entry, record.processed ? &*record.processed : nullptr)));
    }
    write_lines(path, lines);
}

void write_corpus(const std::filesystem::path& path, std::span<const FunctionEntry> entries) {
    std::vector<std::string> lines;
    lines.reserve(entries.size());
    for (const FunctionEntry& entry : entries) lines.push_back(dump(record_json(entry, nullptr)));
    write_lines(path, lines);
}

}  // namespace scope
