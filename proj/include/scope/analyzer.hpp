#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scope/lexer.hpp"

namespace scope {

enum class ParseError : std::uint8_t {
    PreprocessorDirective,
    UnbalancedBraces,
    NoFunctionFound,
    LexicalGarbage,
};

std::string_view to_string(ParseError error);
std::optional<ParseError> parse_error_from_string(std::string_view name);

/// Ok, or the first error detected in enum order.
struct ParseStatus {
    std::optional<ParseError> error;
    bool ok() const { return !error.has_value(); }
    bool operator==(const ParseStatus&) const = default;
};

/// A declared name and every occurrence of that spelling in the snippet.
struct NameOccurrences {
    std::string name;
    std::vector<Span> occurrences;
};

/// The programmer-defined names of a snippet: the functions it defines and
/// the variables they declare (parameters, locals, for-init declarations),
/// each in order of first definition/declaration. A name is listed at most
/// once across both lists; first classification wins.
struct DeclarationMap {
    std::vector<NameOccurrences> functions;
    std::vector<NameOccurrences> variables;

    bool declares(std::string_view name) const;
    bool empty() const { return functions.empty() && variables.empty(); }
};

struct AnalyzeOptions {
    // Delete preprocessor directive tokens instead of marking the entry as
    // an error. Off by default: macro entries are excluded, not repaired.
    bool strip_directives = false;
    // Error when unknown tokens exceed this fraction of non-trivia tokens.
    // The default 0 marks any unknown token as an error.
    double garbage_fraction = 0.0;
};

struct AnalysisResult {
    DeclarationMap declarations;
    ParseStatus status;
};

/// Structural analysis of a lexed snippet. Detection rules:
///   (a) an identifier immediately preceding a `(` whose matched `)` is
///       followed by `{` at top brace level defines a function;
///   (b) each parameter of such a definition declares a variable (the last
///       depth-1 identifier of the parameter, before any `[` or `=`);
///   (c) inside bodies, a statement-initial run of type-ish tokens plus
///       `*`/`&` decorations followed by an identifier terminated by
///       `=` `,` `;` `[` or `)` declares that identifier;
///   (d) every other identifier (callees, globals, types, members) is not
///       programmer-defined.
/// On error the map holds whatever was recovered before/despite the error.
AnalysisResult analyze(std::span<const Token> tokens, const AnalyzeOptions& options = {});

}  // namespace scope
