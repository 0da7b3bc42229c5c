#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scope/analyzer.hpp"
#include "scope/lexer.hpp"

namespace scope {

enum class OutputMode : std::uint8_t { Text, Tokens };

/// Which transformation passes to apply. Flags are independent; passes run
/// in a fixed order: comments, strings, renaming, whitespace.
struct TransformConfig {
    bool strip_comments = true;
    bool genericize_strings = true;
    bool rename_identifiers = true;
    bool normalize_whitespace = true;
    OutputMode output_mode = OutputMode::Text;
    bool operator==(const TransformConfig&) const = default;
};

/// Replacement text for every string literal. Quotes included, so the
/// sentinel is itself a valid string literal and output re-tokenizes cleanly.
inline constexpr std::string_view kStringSentinel = "\"<STR>\"";

std::string canonical_function_name(std::size_t index);  // FUNC_<index>
std::string canonical_variable_name(std::size_t index);  // VAR_<index>

std::vector<Token> strip_comments(std::vector<Token> tokens);
std::vector<Token> genericize_strings(std::vector<Token> tokens);

/// Rename every occurrence of the i-th defined function to FUNC_i and the
/// j-th declared variable to VAR_j (0-based, first-definition order). The
/// map must come from analysis of this same snippet.
std::vector<Token> rename_identifiers(std::vector<Token> tokens, const DeclarationMap& declarations);

/// Tokens that count toward entry size: everything except whitespace and
/// newlines. Comments count until stripped, which is what makes comment
/// removal visible in the before/after counts.
std::size_t count_content_tokens(std::span<const Token> tokens);

/// One snippet's processing outcome. Error entries carry the status and the
/// raw token count only; no normalized output fields are produced for them.
struct ProcessedEntry {
    std::string entry_id;
    ParseStatus status;
    std::string normalized_text;                 // OutputMode::Text, status ok
    std::vector<std::string> normalized_tokens;  // OutputMode::Tokens, status ok
    std::size_t raw_token_count = 0;
    std::size_t processed_token_count = 0;
    TransformConfig applied_config;
};

/// tokenize -> analyze -> enabled passes in fixed order -> render/package.
/// Failures surface only through the status field, never as exceptions.
ProcessedEntry process_function(std::string_view source,
                                const TransformConfig& config = {},
                                std::string entry_id = {},
                                const AnalyzeOptions& analyze_options = {});

}  // namespace scope
