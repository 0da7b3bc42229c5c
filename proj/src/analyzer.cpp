#include "scope/analyzer.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <unordered_map>
#include <unordered_set>

namespace scope {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Keywords that can open a declaration: types, cv, storage and related
// specifiers. Statement keywords (return, if, goto, ...) must not.
bool is_typeish(std::string_view word) {
    static constexpr std::array<std::string_view, 36> kTypeish = {
        "_Atomic",  "_BitInt",   "_Bool",     "_Complex", "_Thread_local",
        "auto",     "bool",      "char",      "char16_t", "char32_t",
        "char8_t",  "class",     "const",     "constexpr", "double",
        "enum",     "extern",    "float",     "inline",   "int",
        "long",     "mutable",   "register",  "restrict", "short",
        "signed",   "static",    "struct",    "thread_local", "typedef",
        "typename", "union",     "unsigned",  "void",     "volatile",
        "wchar_t",
    };
    return std::find(kTypeish.begin(), kTypeish.end(), word) != kTypeish.end();
}

bool is_decoration(const Token& t) {
    return t.kind == TokenKind::Operator &&
           (t.text == "*" || t.text == "&" || t.text == "&&");
}

bool is_cv(const Token& t) {
    return t.kind == TokenKind::Keyword && (t.text == "const" || t.text == "volatile");
}

bool text_is(const Token& t, std::string_view s) { return t.text == s; }

bool is_declarator_terminator(const Token& t) {
    return text_is(t, "=") || text_is(t, ",") || text_is(t, ";") || text_is(t, "[") ||
           text_is(t, ")");
}

struct FnDef {
    std::size_t name = npos;    // sig index of the defining identifier
    std::size_t lparen = npos;  // sig indices of the delimiters
    std::size_t rparen = npos;
    std::size_t lbrace = npos;
    std::size_t rbrace = npos;  // npos when the body never closes
};

struct DeclEvent {
    std::size_t token_index;  // absolute position, for first-comes-first order
    std::string name;
    bool is_function = false;
};

// Analysis works on the significant view: non-trivia tokens minus
// preprocessor directives (directives either error the entry out or were
// stripped by option; either way they play no structural role).
class SigView {
  public:
    SigView(std::span<const Token> tokens) : tokens_(tokens) {
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (!is_trivia(tokens[i].kind) &&
                tokens[i].kind != TokenKind::PreprocessorDirective) {
                index_.push_back(i);
            }
        }
    }

    std::size_t size() const { return index_.size(); }
    const Token& at(std::size_t s) const { return tokens_[index_[s]]; }
    std::size_t token_index(std::size_t s) const { return index_[s]; }

    std::size_t match_paren(std::size_t open) const { return match(open, "(", ")"); }
    std::size_t match_brace(std::size_t open) const { return match(open, "{", "}"); }

  private:
    std::size_t match(std::size_t open, std::string_view l, std::string_view r) const {
        int depth = 0;
        for (std::size_t s = open; s < size(); ++s) {
            if (text_is(at(s), l)) ++depth;
            else if (text_is(at(s), r) && --depth == 0) return s;
        }
        return npos;
    }

    std::span<const Token> tokens_;
    std::vector<std::size_t> index_;
};

std::vector<FnDef> find_function_definitions(const SigView& sig) {
    std::vector<FnDef> defs;
    int brace_depth = 0;
    int paren_depth = 0;
    for (std::size_t s = 0; s < sig.size(); ++s) {
        const Token& t = sig.at(s);
        if (text_is(t, "(") && brace_depth == 0 && paren_depth == 0 && s > 0 &&
            sig.at(s - 1).kind == TokenKind::Identifier) {
            const std::size_t close = sig.match_paren(s);
            if (close != npos && close + 1 < sig.size() && text_is(sig.at(close + 1), "{")) {
                FnDef def;
                def.name = s - 1;
                def.lparen = s;
                def.rparen = close;
                def.lbrace = close + 1;
                def.rbrace = sig.match_brace(close + 1);
                defs.push_back(def);
            }
        }
        if (text_is(t, "(")) ++paren_depth;
        else if (text_is(t, ")")) --paren_depth;
        else if (text_is(t, "{")) ++brace_depth;
        else if (text_is(t, "}")) --brace_depth;
    }
    return defs;
}

// Rule (b): the declared name of one parameter is its last paren-depth-1
// identifier, ignoring everything past a depth-1 `[` or `=`. Parameters that
// keep their name inside nested parentheses (function pointers) are not
// recovered.
void collect_parameters(const SigView& sig, const FnDef& def, std::vector<DeclEvent>& events) {
    int depth = 1;
    std::size_t last_id = npos;
    bool truncated = false;
    auto flush = [&] {
        if (last_id != npos)
            events.push_back({sig.token_index(last_id), sig.at(last_id).text, false});
        last_id = npos;
        truncated = false;
    };
    for (std::size_t s = def.lparen + 1; s < def.rparen; ++s) {
        const Token& t = sig.at(s);
        if (text_is(t, "(")) ++depth;
        else if (text_is(t, ")")) --depth;
        if (depth != 1) continue;
        if (text_is(t, ",")) flush();
        else if (!truncated) {
            if (text_is(t, "[") || text_is(t, "=")) truncated = true;
            else if (t.kind == TokenKind::Identifier) last_id = s;
        }
    }
    flush();
}

// Rule (c): at a statement start, a run of type-ish tokens (type keywords,
// identifiers, `::`) with `*`/`&` decorations whose last identifier is
// directly followed by `=` `,` `;` `[` or `)` declares that identifier, plus
// any further comma-separated declarators of the same statement.
struct DeclMatch {
    std::vector<DeclEvent> events;
    std::size_t resume;  // sig index where the main scan continues
};

std::optional<DeclMatch> try_declaration(const SigView& sig, std::size_t start, std::size_t end) {
    std::size_t i = start;
    std::size_t support = 0;  // specifier tokens besides the declarator
    std::vector<std::size_t> ids;
    while (i < end) {
        const Token& t = sig.at(i);
        if (t.kind == TokenKind::Identifier) {
            ids.push_back(i);
            ++i;
        } else if (t.kind == TokenKind::Keyword && is_typeish(t.text)) {
            ++support;
            ++i;
        } else if (t.kind == TokenKind::Operator && text_is(t, "::")) {
            ++i;
        } else if (is_decoration(t)) {
            if (i == start) return std::nullopt;  // `*p = ...` is an expression
            ++i;
        } else {
            break;
        }
    }
    if (ids.empty() || i == start || i >= end) return std::nullopt;
    const std::size_t declarator = ids.back();
    support += ids.size() - 1;
    if (support == 0) return std::nullopt;
    if (declarator + 1 != i) return std::nullopt;  // decorations after the name
    if (!is_declarator_terminator(sig.at(i))) return std::nullopt;

    DeclMatch match;
    match.events.push_back({sig.token_index(declarator), sig.at(declarator).text, false});

    // Walk the rest of the statement: skip initializers/extents depth-aware,
    // pick up further declarators after top-level commas.
    int pdepth = 0, bdepth = 0, sdepth = 0;
    std::size_t cur = i;
    while (cur < end) {
        const Token& t = sig.at(cur);
        if (text_is(t, "(")) ++pdepth;
        else if (text_is(t, ")")) {
            if (--pdepth < 0) break;  // closing an enclosing scope (for-header)
        } else if (text_is(t, "{")) ++bdepth;
        else if (text_is(t, "}")) {
            if (--bdepth < 0) break;
        } else if (text_is(t, "[")) ++sdepth;
        else if (text_is(t, "]")) {
            if (--sdepth < 0) break;
        } else if (pdepth == 0 && bdepth == 0 && sdepth == 0) {
            if (text_is(t, ";")) break;
            if (text_is(t, ",")) {
                std::size_t nxt = cur + 1;
                while (nxt < end && (is_decoration(sig.at(nxt)) || is_cv(sig.at(nxt)))) ++nxt;
                if (nxt + 1 < end && sig.at(nxt).kind == TokenKind::Identifier &&
                    is_declarator_terminator(sig.at(nxt + 1))) {
                    match.events.push_back({sig.token_index(nxt), sig.at(nxt).text, false});
                    cur = nxt;  // continue from the new declarator's terminator
                } else {
                    break;
                }
            }
        }
        ++cur;
    }
    match.resume = cur;
    return match;
}

void collect_body_locals(const SigView& sig, const FnDef& def, std::vector<DeclEvent>& events) {
    const std::size_t body_end = def.rbrace == npos ? sig.size() : def.rbrace;
    bool stmt_start = true;
    std::size_t s = def.lbrace + 1;
    while (s < body_end) {
        if (stmt_start) {
            if (auto match = try_declaration(sig, s, body_end)) {
                events.insert(events.end(), match->events.begin(), match->events.end());
                s = match->resume;
                if (s >= body_end) break;
            }
        }
        const Token& t = sig.at(s);
        stmt_start = text_is(t, "{") || text_is(t, "}") || text_is(t, ";") ||
                     (text_is(t, "(") && s > 0 && sig.at(s - 1).kind == TokenKind::Keyword &&
                      text_is(sig.at(s - 1), "for"));
        ++s;
    }
}

}  // namespace

std::string_view to_string(ParseError error) {
    switch (error) {
        case ParseError::PreprocessorDirective: return "preprocessor_directive";
        case ParseError::UnbalancedBraces: return "unbalanced_braces";
        case ParseError::NoFunctionFound: return "no_function_found";
        case ParseError::LexicalGarbage: return "lexical_garbage";
    }
    return "unknown";
}

std::optional<ParseError> parse_error_from_string(std::string_view name) {
    if (name == "preprocessor_directive") return ParseError::PreprocessorDirective;
    if (name == "unbalanced_braces") return ParseError::UnbalancedBraces;
    if (name == "no_function_found") return ParseError::NoFunctionFound;
    if (name == "lexical_garbage") return ParseError::LexicalGarbage;
    return std::nullopt;
}

bool DeclarationMap::declares(std::string_view name) const {
    auto has = [&](const std::vector<NameOccurrences>& list) {
        return std::any_of(list.begin(), list.end(),
                           [&](const NameOccurrences& n) { return n.name == name; });
    };
    return has(functions) || has(variables);
}

AnalysisResult analyze(std::span<const Token> tokens, const AnalyzeOptions& options) {
    AnalysisResult result;
    const SigView sig(tokens);

    bool directive_present = false;
    if (!options.strip_directives) {
        directive_present = std::any_of(tokens.begin(), tokens.end(), [](const Token& t) {
            return t.kind == TokenKind::PreprocessorDirective;
        });
    }

    bool unbalanced = false;
    int depth = 0;
    for (std::size_t s = 0; s < sig.size(); ++s) {
        if (text_is(sig.at(s), "{")) ++depth;
        else if (text_is(sig.at(s), "}") && --depth < 0) {
            unbalanced = true;
            break;
        }
    }
    if (depth != 0) unbalanced = true;

    const std::vector<FnDef> defs = find_function_definitions(sig);

    std::vector<DeclEvent> events;
    for (const FnDef& def : defs) {
        events.push_back({sig.token_index(def.name), sig.at(def.name).text, true});
        collect_parameters(sig, def, events);
        collect_body_locals(sig, def, events);
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const DeclEvent& a, const DeclEvent& b) {
                         return a.token_index < b.token_index;
                     });

    std::unordered_set<std::string> seen;
    for (const DeclEvent& e : events) {
        if (!seen.insert(e.name).second) continue;  // first classification wins
        auto& list = e.is_function ? result.declarations.functions
                                   : result.declarations.variables;
        list.push_back(NameOccurrences{e.name, {}});
    }

    std::unordered_map<std::string_view, NameOccurrences*> by_name;
    for (auto& n : result.declarations.functions) by_name[n.name] = &n;
    for (auto& n : result.declarations.variables) by_name[n.name] = &n;
    for (const Token& t : tokens) {
        if (t.kind != TokenKind::Identifier) continue;
        if (auto it = by_name.find(t.text); it != by_name.end())
            it->second->occurrences.push_back(t.span);
    }

    std::size_t unknown_count = 0;
    for (std::size_t s = 0; s < sig.size(); ++s)
        if (sig.at(s).kind == TokenKind::Unknown) ++unknown_count;

    if (directive_present) {
        result.status.error = ParseError::PreprocessorDirective;
    } else if (unbalanced) {
        result.status.error = ParseError::UnbalancedBraces;
    } else if (defs.empty()) {
        result.status.error = ParseError::NoFunctionFound;
    } else if (static_cast<double>(unknown_count) >
               options.garbage_fraction * static_cast<double>(sig.size())) {
        result.status.error = ParseError::LexicalGarbage;
    }
    return result;
}

}  // namespace scope
