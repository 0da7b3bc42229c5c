#include "scope/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace scope {

namespace {

// Union of the C (C11/C23) and C++20 reserved words, sorted for binary search.
constexpr std::array kKeywords = {
    std::string_view{"_Alignas"},
    std::string_view{"_Alignof"},
    std::string_view{"_Atomic"},
    std::string_view{"_BitInt"},
    std::string_view{"_Bool"},
    std::string_view{"_Complex"},
    std::string_view{"_Decimal128"},
    std::string_view{"_Decimal32"},
    std::string_view{"_Decimal64"},
    std::string_view{"_Generic"},
    std::string_view{"_Imaginary"},
    std::string_view{"_Noreturn"},
    std::string_view{"_Static_assert"},
    std::string_view{"_Thread_local"},
    std::string_view{"alignas"},
    std::string_view{"alignof"},
    std::string_view{"and"},
    std::string_view{"and_eq"},
    std::string_view{"asm"},
    std::string_view{"auto"},
    std::string_view{"bitand"},
    std::string_view{"bitor"},
    std::string_view{"bool"},
    std::string_view{"break"},
    std::string_view{"case"},
    std::string_view{"catch"},
    std::string_view{"char"},
    std::string_view{"char16_t"},
    std::string_view{"char32_t"},
    std::string_view{"char8_t"},
    std::string_view{"class"},
    std::string_view{"co_await"},
    std::string_view{"co_return"},
    std::string_view{"co_yield"},
    std::string_view{"compl"},
    std::string_view{"concept"},
    std::string_view{"const"},
    std::string_view{"const_cast"},
    std::string_view{"consteval"},
    std::string_view{"constexpr"},
    std::string_view{"constinit"},
    std::string_view{"continue"},
    std::string_view{"decltype"},
    std::string_view{"default"},
    std::string_view{"delete"},
    std::string_view{"do"},
    std::string_view{"double"},
    std::string_view{"dynamic_cast"},
    std::string_view{"else"},
    std::string_view{"enum"},
    std::string_view{"explicit"},
    std::string_view{"export"},
    std::string_view{"extern"},
    std::string_view{"false"},
    std::string_view{"float"},
    std::string_view{"for"},
    std::string_view{"friend"},
    std::string_view{"goto"},
    std::string_view{"if"},
    std::string_view{"inline"},
    std::string_view{"int"},
    std::string_view{"long"},
    std::string_view{"mutable"},
    std::string_view{"namespace"},
    std::string_view{"new"},
    std::string_view{"noexcept"},
    std::string_view{"not"},
    std::string_view{"not_eq"},
    std::string_view{"nullptr"},
    std::string_view{"operator"},
    std::string_view{"or"},
    std::string_view{"or_eq"},
    std::string_view{"private"},
    std::string_view{"protected"},
    std::string_view{"public"},
    std::string_view{"register"},
    std::string_view{"reinterpret_cast"},
    std::string_view{"requires"},
    std::string_view{"restrict"},
    std::string_view{"return"},
    std::string_view{"short"},
    std::string_view{"signed"},
    std::string_view{"sizeof"},
    std::string_view{"static"},
    std::string_view{"static_assert"},
    std::string_view{"static_cast"},
    std::string_view{"struct"},
    std::string_view{"switch"},
    std::string_view{"template"},
    std::string_view{"this"},
    std::string_view{"thread_local"},
    std::string_view{"throw"},
    std::string_view{"true"},
    std::string_view{"try"},
    std::string_view{"typedef"},
    std::string_view{"typeid"},
    std::string_view{"typename"},
    std::string_view{"typeof"},
    std::string_view{"typeof_unqual"},
    std::string_view{"union"},
    std::string_view{"unsigned"},
    std::string_view{"using"},
    std::string_view{"virtual"},
    std::string_view{"void"},
    std::string_view{"volatile"},
    std::string_view{"wchar_t"},
    std::string_view{"while"},
    std::string_view{"xor"},
    std::string_view{"xor_eq"},
};

constexpr std::array<std::string_view, 5> kThreeCharOps = {"<<=", ">>=", "<=>", "->*", "..."};
constexpr std::array<std::string_view, 21> kTwoCharOps = {
    "::", "->", "++", "--", ".*", "+=", "-=", "*=", "/=", "%=", "^=",
    "&=", "|=", "==", "!=", "<=", ">=", "&&", "||", "<<", ">>"};

bool is_ident_start(unsigned char c) { return c == '_' || std::isalpha(c) != 0; }
bool is_ident_char(unsigned char c) { return c == '_' || std::isalnum(c) != 0; }
bool is_digit(unsigned char c) { return std::isdigit(c) != 0; }
bool is_blank(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\v' || c == '\f';
}
bool is_line_break(char c) { return c == '\n' || c == '\r'; }
bool is_one_char_op(char c) {
    return std::string_view{"+-*/%^&|~!=<>?:."}.find(c) != std::string_view::npos;
}
bool is_punct(char c) { return std::string_view{"()[]{};,"}.find(c) != std::string_view::npos; }

constexpr std::array<std::string_view, 5> kRawPrefixes = {"R", "uR", "UR", "LR", "u8R"};
constexpr std::array<std::string_view, 4> kNarrowPrefixes = {"u8", "u", "U", "L"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& set, std::string_view s) {
    return std::find(set.begin(), set.end(), s) != set.end();
}

// Stateful scanner; every *lex_ method returns the end offset of the token it
// recognized, starting at `pos`.
struct Scanner {
    std::string_view src;
    std::size_t pos = 0;

    std::size_t size() const { return src.size(); }
    char at(std::size_t i) const { return src[i]; }
    bool has(std::size_t i) const { return i < src.size(); }

    std::size_t lex_whitespace() {
        std::size_t i = pos;
        while (has(i) && is_blank(static_cast<unsigned char>(at(i)))) ++i;
        return i;
    }

    std::size_t lex_line_comment() {
        std::size_t i = pos + 2;
        while (has(i) && !is_line_break(at(i))) {
            // Backslash-newline continues a line comment onto the next line.
            if (at(i) == '\\' && has(i + 1) && is_line_break(at(i + 1))) {
                i += (at(i + 1) == '\r' && has(i + 2) && at(i + 2) == '\n') ? 3 : 2;
            } else {
                ++i;
            }
        }
        return i;
    }

    // Returns npos when the comment never closes.
    std::size_t lex_block_comment() {
        const std::size_t k = src.find("*/", pos + 2);
        if (k == std::string_view::npos) return std::string_view::npos;
        return k + 2;
    }

    // Quoted literal without raw-string syntax. `start` is the prefix start,
    // `quote_pos` the opening quote. Returns the end offset and whether the
    // literal actually terminated; on failure at a raw newline, end is the
    // newline offset, on failure at end of input, end is size().
    std::pair<std::size_t, bool> lex_quoted(std::size_t quote_pos, char quote) {
        std::size_t i = quote_pos + 1;
        while (has(i)) {
            const char c = at(i);
            if (c == quote) return {i + 1, true};
            if (is_line_break(c)) return {i, false};
            if (c == '\\') {
                if (!has(i + 1)) return {size(), false};
                // An escaped CRLF is one continuation, not CR + escaped LF.
                i += (at(i + 1) == '\r' && has(i + 2) && at(i + 2) == '\n') ? 3 : 2;
                continue;
            }
            ++i;
        }
        return {size(), false};
    }

    // Raw string R"delim( ... )delim". Returns end offset, or npos when the
    // delimiter is malformed or the body never closes.
    std::size_t lex_raw_string(std::size_t quote_pos) {
        std::size_t i = quote_pos + 1;
        const std::size_t delim_begin = i;
        while (has(i) && at(i) != '(') {
            const char c = at(i);
            if (i - delim_begin >= 16 || c == ')' || c == '\\' || is_blank(static_cast<unsigned char>(c)) || is_line_break(c))
                return std::string_view::npos;
            ++i;
        }
        if (!has(i)) return std::string_view::npos;
        std::string closer = ")";
        closer.append(src.substr(delim_begin, i - delim_begin));
        closer.push_back('"');
        const std::size_t k = src.find(closer, i + 1);
        if (k == std::string_view::npos) return std::string_view::npos;
        return k + closer.size();
    }

    std::size_t lex_pp_number() {
        std::size_t i = pos;
        if (at(i) == '.') ++i;  // leading ".5" form; caller verified the digit
        ++i;
        while (has(i)) {
            const char c = at(i);
            if ((c == 'e' || c == 'E' || c == 'p' || c == 'P') && has(i + 1) &&
                (at(i + 1) == '+' || at(i + 1) == '-')) {
                i += 2;
            } else if (is_ident_char(static_cast<unsigned char>(c)) || c == '.') {
                ++i;
            } else if (c == '\'' && has(i + 1) && is_ident_char(static_cast<unsigned char>(at(i + 1)))) {
                i += 2;  // digit separator
            } else {
                break;
            }
        }
        return i;
    }

    std::size_t lex_identifier() {
        std::size_t i = pos + 1;
        while (has(i) && is_ident_char(static_cast<unsigned char>(at(i)))) ++i;
        return i;
    }

    // Directive body: from `#` through the logical line end. Newlines inside
    // block comments or after a backslash do not terminate it; a raw newline
    // anywhere else does (even inside a quoted literal, mirroring the
    // line-splicing translation phase).
    std::size_t lex_directive() {
        enum class State { Normal, String, Char, Block };
        State state = State::Normal;
        std::size_t i = pos + 1;
        while (has(i)) {
            const char c = at(i);
            if (state == State::Block) {
                if (c == '*' && has(i + 1) && at(i + 1) == '/') {
                    state = State::Normal;
                    i += 2;
                    continue;
                }
                ++i;
                continue;
            }
            if (is_line_break(c)) {
                if (at(i - 1) == '\\') {
                    // Spliced line; skip the full line break and continue.
                    i += (c == '\r' && has(i + 1) && at(i + 1) == '\n') ? 2 : 1;
                    continue;
                }
                return i;
            }
            if (c == '\\' && (state == State::String || state == State::Char)) {
                if (!has(i + 1)) return size();
                // An escaped CRLF is one continuation, not CR + escaped LF.
                i += (at(i + 1) == '\r' && has(i + 2) && at(i + 2) == '\n') ? 3 : 2;
                continue;
            }
            switch (state) {
                case State::Normal:
                    if (c == '"') state = State::String;
                    else if (c == '\'') state = State::Char;
                    else if (c == '/' && has(i + 1) && at(i + 1) == '*') {
                        state = State::Block;
                        ++i;
                    }
                    break;
                case State::String:
                    if (c == '"') state = State::Normal;
                    break;
                case State::Char:
                    if (c == '\'') state = State::Normal;
                    break;
                case State::Block:
                    break;
            }
            ++i;
        }
        return size();
    }
};

}  // namespace

std::string_view to_string(TokenKind kind) {
    switch (kind) {
        case TokenKind::Identifier: return "Identifier";
        case TokenKind::Keyword: return "Keyword";
        case TokenKind::StringLiteral: return "StringLiteral";
        case TokenKind::CharLiteral: return "CharLiteral";
        case TokenKind::NumberLiteral: return "NumberLiteral";
        case TokenKind::Operator: return "Operator";
        case TokenKind::Punctuation: return "Punctuation";
        case TokenKind::LineComment: return "LineComment";
        case TokenKind::BlockComment: return "BlockComment";
        case TokenKind::PreprocessorDirective: return "PreprocessorDirective";
        case TokenKind::Whitespace: return "Whitespace";
        case TokenKind::Newline: return "Newline";
        case TokenKind::Unknown: return "Unknown";
    }
    return "Unknown";
}

bool is_keyword(std::string_view word) {
    return std::binary_search(kKeywords.begin(), kKeywords.end(), word);
}

bool is_trivia(TokenKind kind) {
    return kind == TokenKind::Whitespace || kind == TokenKind::Newline ||
           kind == TokenKind::LineComment || kind == TokenKind::BlockComment;
}

std::vector<Token> tokenize(std::string_view source) {
    std::vector<Token> tokens;
    Scanner sc{source};
    bool at_line_start = true;

    auto emit = [&](TokenKind kind, std::size_t end) {
        tokens.push_back(Token{kind, std::string(source.substr(sc.pos, end - sc.pos)),
                               Span{sc.pos, end}});
        sc.pos = end;
        if (kind == TokenKind::Newline) at_line_start = true;
        else if (kind != TokenKind::Whitespace && kind != TokenKind::BlockComment)
            at_line_start = false;
    };

    while (sc.pos < source.size()) {
        const char c = source[sc.pos];
        const unsigned char uc = static_cast<unsigned char>(c);

        if (is_line_break(c)) {
            // "\r\n" is one line ending; a lone "\r" counts as one as well.
            std::size_t end = sc.pos + 1;
            if (c == '\r' && sc.has(end) && source[end] == '\n') ++end;
            emit(TokenKind::Newline, end);
            continue;
        }
        if (is_blank(uc)) {
            emit(TokenKind::Whitespace, sc.lex_whitespace());
            continue;
        }
        if (c == '/' && sc.has(sc.pos + 1) && source[sc.pos + 1] == '/') {
            emit(TokenKind::LineComment, sc.lex_line_comment());
            continue;
        }
        if (c == '/' && sc.has(sc.pos + 1) && source[sc.pos + 1] == '*') {
            const std::size_t end = sc.lex_block_comment();
            if (end == std::string_view::npos) {
                emit(TokenKind::Unknown, source.size());  // unterminated: rest of input
            } else {
                emit(TokenKind::BlockComment, end);
            }
            continue;
        }
        if (c == '"' || c == '\'') {
            auto [end, ok] = sc.lex_quoted(sc.pos, c);
            emit(ok ? (c == '"' ? TokenKind::StringLiteral : TokenKind::CharLiteral)
                    : TokenKind::Unknown,
                 end);
            continue;
        }
        if (is_digit(uc) || (c == '.' && sc.has(sc.pos + 1) &&
                             is_digit(static_cast<unsigned char>(source[sc.pos + 1])))) {
            emit(TokenKind::NumberLiteral, sc.lex_pp_number());
            continue;
        }
        if (is_ident_start(uc)) {
            const std::size_t end = sc.lex_identifier();
            const std::string_view word = source.substr(sc.pos, end - sc.pos);
            if (sc.has(end) && source[end] == '"') {
                if (contains(kRawPrefixes, word)) {
                    const std::size_t raw_end = sc.lex_raw_string(end);
                    emit(raw_end == std::string_view::npos ? TokenKind::Unknown
                                                           : TokenKind::StringLiteral,
                         raw_end == std::string_view::npos ? source.size() : raw_end);
                    continue;
                }
                if (contains(kNarrowPrefixes, word)) {
                    auto [lit_end, ok] = sc.lex_quoted(end, '"');
                    emit(ok ? TokenKind::StringLiteral : TokenKind::Unknown, lit_end);
                    continue;
                }
            }
            if (sc.has(end) && source[end] == '\'' && contains(kNarrowPrefixes, word)) {
                auto [lit_end, ok] = sc.lex_quoted(end, '\'');
                emit(ok ? TokenKind::CharLiteral : TokenKind::Unknown, lit_end);
                continue;
            }
            emit(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, end);
            continue;
        }
        if (c == '#') {
            if (at_line_start) {
                emit(TokenKind::PreprocessorDirective, sc.lex_directive());
            } else {
                emit(TokenKind::Unknown, sc.pos + 1);
            }
            continue;
        }
        if (is_punct(c)) {
            emit(TokenKind::Punctuation, sc.pos + 1);
            continue;
        }
        if (is_one_char_op(c)) {
            const std::string_view rest = source.substr(sc.pos);
            std::size_t len = 1;
            for (const auto op : kThreeCharOps) {
                if (rest.substr(0, 3) == op) { len = 3; break; }
            }
            if (len == 1) {
                for (const auto op : kTwoCharOps) {
                    if (rest.substr(0, 2) == op) { len = 2; break; }
                }
            }
            emit(TokenKind::Operator, sc.pos + len);
            continue;
        }
        emit(TokenKind::Unknown, sc.pos + 1);
    }
    return tokens;
}

std::string render(std::span<const Token> tokens, RenderMode mode) {
    std::string out;
    if (mode == RenderMode::Verbatim) {
        for (const Token& t : tokens) out += t.text;
        return out;
    }
    bool first = true;
    for (const Token& t : tokens) {
        if (is_trivia(t.kind)) continue;
        if (!first) out.push_back(' ');
        out += t.text;
        first = false;
    }
    return out;
}

}  // namespace scope
