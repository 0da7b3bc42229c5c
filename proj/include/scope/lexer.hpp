#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace scope {

/// Lexical class of a token. Keywords are the fixed union of C and C++
/// reserved words; an Identifier is never a member of that set.
enum class TokenKind : std::uint8_t {
    Identifier,
    Keyword,
    StringLiteral,
    CharLiteral,
    NumberLiteral,
    Operator,
    Punctuation,
    LineComment,
    BlockComment,
    PreprocessorDirective,
    Whitespace,
    Newline,
    Unknown,
};

std::string_view to_string(TokenKind kind);

/// Half-open byte range [begin, end) into the original source.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
    bool operator==(const Span&) const = default;
};

/// One lexical unit. `text` is the exact source slice, so concatenating the
/// texts of a token stream reproduces the input byte-for-byte. Transformation
/// passes may rewrite `text`; `span` always refers to the original source.
struct Token {
    TokenKind kind = TokenKind::Unknown;
    std::string text;
    Span span;
    bool operator==(const Token&) const = default;
};

/// True for the C/C++ reserved word set (C11/C23 plus C++20).
bool is_keyword(std::string_view word);

/// Tokens dropped by normalized rendering: whitespace, newlines, comments.
bool is_trivia(TokenKind kind);

/// Lex arbitrary bytes into a loss-free token stream. Malformed input
/// degrades to Unknown tokens, never a failure: an unterminated string or
/// comment becomes a final Unknown token covering the remainder.
std::vector<Token> tokenize(std::string_view source);

enum class RenderMode {
    Verbatim,    // concatenate token text exactly
    Normalized,  // non-trivia tokens joined by single spaces
};

std::string render(std::span<const Token> tokens, RenderMode mode);

}  // namespace scope
