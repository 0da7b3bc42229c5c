#pragma once

// Random well-formed C snippet generator used as an oracle: every snippet is
// built from a token list with the declared names tracked on the side, so
// tests can check analysis results against ground truth the analyzer never
// saw. Generated code stays inside the constructs the detection rules cover
// (no function-pointer parameters, no directives, no bare expression
// statements), which is exactly the well-formed population the property
// suite quantifies over.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace testgen {

struct Snippet {
    std::vector<std::string> tokens;         // non-trivia token texts, in order
    std::string function_name;               // expected functions == {this}
    std::vector<std::string> variable_names; // expected variables, declaration order
};

class Generator {
public:
    explicit Generator(std::uint64_t seed) : rng_(seed) {}

    Snippet generate() {
        Snippet s;
        fresh_serial_ = 0;
        comment_serial_ = 0;
        declared_.clear();

        const bool is_void = pick(4) == 0;
        const std::string return_type = is_void ? "void" : type_name();
        s.function_name = fresh_name("fn");

        emit(s, return_type);
        if (!is_void && pick(6) == 0) emit(s, "*");
        emit(s, s.function_name);
        emit(s, "(");
        const std::size_t param_count = pick(4);
        if (param_count == 0 && pick(2) == 0) {
            emit(s, "void");
        } else {
            for (std::size_t i = 0; i < param_count; ++i) {
                if (i > 0) emit(s, ",");
                parameter(s);
            }
        }
        emit(s, ")");
        block(s, 1 + pick(4), 0);
        if (!is_void) {
            // Rewrite the closing brace into "return expr ; }".
            s.tokens.pop_back();
            emit(s, "return");
            expression(s, 0);
            emit(s, ";");
            emit(s, "}");
        }
        return s;
    }

    /// Canonical rendering: every token separated by one space.
    static std::string plain_text(const Snippet& s) {
        std::string out;
        for (const std::string& token : s.tokens) {
            if (!out.empty()) out.push_back(' ');
            out += token;
        }
        return out;
    }

    /// Same token sequence under scrambled inter-token whitespace.
    std::string spaced_text(const Snippet& s) {
        static const char* kGaps[] = {" ", "  ", "\t", "\n", " \n  ", "\t ", "\n\n"};
        std::string out;
        for (const std::string& token : s.tokens) {
            if (!out.empty()) out += kGaps[pick(7)];
            out += token;
        }
        if (pick(2) == 0) out += kGaps[pick(7)];
        return out;
    }

    /// Same token sequence with at least one comment injected.
    std::string commented_text(const Snippet& s) {
        const std::size_t insertions = 1 + pick(4);
        std::vector<std::size_t> gaps;  // comment goes before tokens[gap]
        for (std::size_t i = 0; i < insertions; ++i) gaps.push_back(pick(s.tokens.size() + 1));
        std::string out;
        const auto inject = [&](bool line_ok) {
            const std::string tag = "note" + std::to_string(comment_serial_++);
            if (line_ok && pick(3) == 0) {
                out += "// " + tag + "\n";
            } else {
                out += "/* " + tag + " */ ";
            }
        };
        for (std::size_t i = 0; i <= s.tokens.size(); ++i) {
            for (const std::size_t gap : gaps)
                if (gap == i) inject(true);
            if (i < s.tokens.size()) {
                out += s.tokens[i];
                out.push_back(' ');
            }
        }
        return out;
    }

    /// Consistent renaming of every declared name; the oracle lists follow.
    static Snippet alpha_renamed(const Snippet& s) {
        const auto renamed = [](const std::string& name) { return name + "_r"; };
        Snippet out = s;
        out.function_name = renamed(s.function_name);
        for (std::string& name : out.variable_names) name = renamed(name);
        for (std::string& token : out.tokens) {
            if (token == s.function_name) {
                token = out.function_name;
                continue;
            }
            for (std::size_t i = 0; i < s.variable_names.size(); ++i)
                if (token == s.variable_names[i]) token = out.variable_names[i];
        }
        return out;
    }

private:
    std::mt19937_64 rng_;
    std::size_t fresh_serial_ = 0;
    std::size_t comment_serial_ = 0;
    std::vector<std::string> declared_;  // names usable in expressions

    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

    static void emit(Snippet& s, std::string token) { s.tokens.push_back(std::move(token)); }

    std::string fresh_name(const char* stem) {
        static const char kLetters[] = "abcdefghijklmnop";
        std::string name = stem;
        name += kLetters[pick(16)];
        name += kLetters[pick(16)];
        name += std::to_string(fresh_serial_++);
        return name;
    }

    std::string type_name() {
        static const char* kTypes[] = {"int",   "long",   "short",  "double",
                                       "float", "char",   "unsigned", "signed"};
        return kTypes[pick(8)];
    }

    std::string external_name() {
        static const char* kExternals[] = {"helper", "combine", "tally", "g_limit", "g_step"};
        return kExternals[pick(5)];
    }

    std::string declare(Snippet& s, const char* stem) {
        const std::string name = fresh_name(stem);
        s.variable_names.push_back(name);
        declared_.push_back(name);
        return name;
    }

    void parameter(Snippet& s) {
        switch (pick(6)) {
            case 0:
                emit(s, "struct");
                emit(s, "blob");
                break;
            case 1:
                emit(s, "const");
                emit(s, type_name());
                break;
            default:
                emit(s, type_name());
        }
        if (pick(4) == 0) emit(s, "*");
        emit(s, declare(s, "p"));
        if (pick(8) == 0) {  // array parameter
            emit(s, "[");
            if (pick(2) == 0) emit(s, std::to_string(1 + pick(9)));
            emit(s, "]");
        }
    }

    void atom(Snippet& s, int depth) {
        const std::size_t choice = pick(declared_.empty() ? 5 : 7);
        switch (choice) {
            case 0:
                emit(s, std::to_string(pick(1000)));
                break;
            case 1: {
                static const char* kNumbers[] = {"0", "1", "2u", "7L", "1.5", "0.25", "10u", "3"};
                emit(s, kNumbers[pick(8)]);
                break;
            }
            case 2: {
                static const char* kChars[] = {"'a'", "'z'", "'0'", "'\\n'", "' '"};
                emit(s, kChars[pick(5)]);
                break;
            }
            case 3:
                emit(s, external_name());
                break;
            case 4:
                if (depth < 2) {
                    emit(s, external_name());
                    emit(s, "(");
                    expression(s, depth + 1);
                    if (pick(2) == 0) {
                        emit(s, ",");
                        expression(s, depth + 1);
                    }
                    emit(s, ")");
                } else {
                    emit(s, std::to_string(pick(100)));
                }
                break;
            default:
                emit(s, declared_[pick(declared_.size())]);
        }
    }

    void expression(Snippet& s, int depth) {
        if (depth < 2 && pick(6) == 0) {
            emit(s, "(");
            expression(s, depth + 1);
            emit(s, ")");
        } else {
            atom(s, depth);
        }
        static const char* kOps[] = {"+", "-", "%", "/"};
        std::size_t terms = pick(3);
        while (terms-- > 0) {
            emit(s, kOps[pick(4)]);
            atom(s, depth);
        }
    }

    std::string string_literal() {
        static const char* kStrings[] = {"\"ok\"",
                                         "\"x = %d\\n\"",
                                         "\"path/to file\"",
                                         "\"quote \\\" inside\"",
                                         "\"tab\\there\"",
                                         "\"\""};
        return kStrings[pick(6)];
    }

    void declaration(Snippet& s) {
        switch (pick(6)) {
            case 0: {  // pointer to string
                emit(s, "const");
                emit(s, "char");
                emit(s, "*");
                emit(s, declare(s, "v"));
                emit(s, "=");
                emit(s, string_literal());
                break;
            }
            case 1: {  // array
                emit(s, type_name());
                emit(s, declare(s, "v"));
                emit(s, "[");
                emit(s, std::to_string(1 + pick(9)));
                emit(s, "]");
                break;
            }
            case 2: {  // two declarators
                emit(s, type_name());
                emit(s, declare(s, "v"));
                emit(s, "=");
                expression(s, 0);
                emit(s, ",");
                emit(s, declare(s, "v"));
                emit(s, "=");
                expression(s, 0);
                break;
            }
            case 3: {  // no initializer
                emit(s, type_name());
                emit(s, declare(s, "v"));
                break;
            }
            case 4: {  // struct local
                emit(s, "struct");
                emit(s, "blob");
                emit(s, declare(s, "v"));
                break;
            }
            default: {
                emit(s, type_name());
                if (pick(4) == 0) emit(s, "*");
                emit(s, declare(s, "v"));
                emit(s, "=");
                expression(s, 0);
            }
        }
        emit(s, ";");
    }

    void statement(Snippet& s, int block_depth) {
        switch (pick(8)) {
            case 0:
                if (!declared_.empty()) {
                    emit(s, declared_[pick(declared_.size())]);
                    emit(s, "=");
                    expression(s, 0);
                    emit(s, ";");
                    break;
                }
                [[fallthrough]];
            case 1: {  // call statement
                emit(s, external_name());
                emit(s, "(");
                if (pick(3) != 0) {
                    if (pick(4) == 0) emit(s, string_literal());
                    else expression(s, 0);
                }
                emit(s, ")");
                emit(s, ";");
                break;
            }
            case 2: {  // if block
                if (block_depth >= 2) {
                    declaration(s);
                    break;
                }
                emit(s, "if");
                emit(s, "(");
                expression(s, 0);
                emit(s, "<");
                expression(s, 0);
                emit(s, ")");
                block(s, 1 + pick(2), block_depth + 1);
                break;
            }
            case 3: {  // while block
                if (block_depth >= 2) {
                    declaration(s);
                    break;
                }
                emit(s, "while");
                emit(s, "(");
                expression(s, 0);
                emit(s, ")");
                block(s, 1 + pick(2), block_depth + 1);
                break;
            }
            case 4: {  // for block with header declaration
                if (block_depth >= 2) {
                    declaration(s);
                    break;
                }
                emit(s, "for");
                emit(s, "(");
                const std::size_t scope_mark = declared_.size();
                const std::string iter = declare(s, "i");
                emit(s, "int");
                emit(s, iter);
                emit(s, "=");
                emit(s, "0");
                emit(s, ";");
                emit(s, iter);
                emit(s, "<");
                atom(s, 1);
                emit(s, ";");
                emit(s, iter);
                emit(s, "=");
                emit(s, iter);
                emit(s, "+");
                emit(s, "1");
                emit(s, ")");
                block(s, 1 + pick(2), block_depth + 1);
                declared_.resize(scope_mark);  // iterator scope ends with the loop
                break;
            }
            default:
                declaration(s);
        }
    }

    void block(Snippet& s, std::size_t statements, int block_depth) {
        const std::size_t scope_mark = declared_.size();
        emit(s, "{");
        for (std::size_t i = 0; i < statements; ++i) statement(s, block_depth);
        emit(s, "}");
        // Names local to this block are gone; the oracle list keeps them,
        // later expressions must not use them.
        declared_.resize(scope_mark);
    }
};

}  // namespace testgen
