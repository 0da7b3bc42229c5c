#include "scope/transforms.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <unordered_map>
#include <unordered_set>

namespace scope {

namespace {

// Index encoded by an already-canonical spelling ("FUNC_3" -> 3), rejecting
// leading zeros so only spellings this module itself emits qualify.
std::optional<std::size_t> canonical_index(std::string_view name, std::string_view prefix) {
    if (name.size() <= prefix.size() || !name.starts_with(prefix)) return std::nullopt;
    const std::string_view digits = name.substr(prefix.size());
    if (digits.size() > 1 && digits.front() == '0') return std::nullopt;
    std::size_t value = 0;
    const char* const last = digits.data() + digits.size();
    const auto [ptr, ec] = std::from_chars(digits.data(), last, value);
    if (ec != std::errc{} || ptr != last) return std::nullopt;
    return value;
}

// Assign canonical names in declaration order. A declared name that is
// already canonical-shaped keeps its spelling and reserves its own index;
// the rest fill the free indices in order.
std::unordered_map<std::string_view, std::string> assign_names(
    const std::vector<NameOccurrences>& declared, std::string_view prefix,
    std::string (*format)(std::size_t)) {
    std::unordered_set<std::size_t> reserved;
    for (const NameOccurrences& n : declared) {
        if (const auto idx = canonical_index(n.name, prefix)) reserved.insert(*idx);
    }
    std::unordered_map<std::string_view, std::string> mapping;
    std::size_t next = 0;
    for (const NameOccurrences& n : declared) {
        if (canonical_index(n.name, prefix)) {
            mapping.emplace(n.name, n.name);
            continue;
        }
        while (reserved.contains(next)) ++next;
        mapping.emplace(n.name, format(next++));
    }
    return mapping;
}

}  // namespace

std::string canonical_function_name(std::size_t index) {
    return "FUNC_" + std::to_string(index);
}

std::string canonical_variable_name(std::size_t index) {
    return "VAR_" + std::to_string(index);
}

std::vector<Token> strip_comments(std::vector<Token> tokens) {
    std::erase_if(tokens, [](const Token& t) {
        return t.kind == TokenKind::LineComment || t.kind == TokenKind::BlockComment;
    });
    return tokens;
}

std::vector<Token> genericize_strings(std::vector<Token> tokens) {
    for (Token& t : tokens) {
        if (t.kind == TokenKind::StringLiteral) t.text = kStringSentinel;
    }
    return tokens;
}

std::vector<Token> rename_identifiers(std::vector<Token> tokens,
                                      const DeclarationMap& declarations) {
    auto mapping = assign_names(declarations.functions, "FUNC_", &canonical_function_name);
    mapping.merge(assign_names(declarations.variables, "VAR_", &canonical_variable_name));
    if (mapping.empty()) return tokens;
    for (Token& t : tokens) {
        if (t.kind != TokenKind::Identifier) continue;
        if (const auto it = mapping.find(t.text); it != mapping.end()) t.text = it->second;
    }
    return tokens;
}

std::size_t count_content_tokens(std::span<const Token> tokens) {
    return static_cast<std::size_t>(
        std::count_if(tokens.begin(), tokens.end(), [](const Token& t) {
            return t.kind != TokenKind::Whitespace && t.kind != TokenKind::Newline;
        }));
}

ProcessedEntry process_function(std::string_view source, const TransformConfig& config,
                                std::string entry_id, const AnalyzeOptions& analyze_options) {
    ProcessedEntry entry;
    entry.entry_id = std::move(entry_id);
    entry.applied_config = config;

    std::vector<Token> tokens = tokenize(source);
    const AnalysisResult analysis = analyze(tokens, analyze_options);
    entry.status = analysis.status;
    entry.raw_token_count = count_content_tokens(tokens);
    if (!entry.status.ok()) return entry;

    if (analyze_options.strip_directives) {
        std::erase_if(tokens, [](const Token& t) {
            return t.kind == TokenKind::PreprocessorDirective;
        });
    }
    if (config.strip_comments) tokens = strip_comments(std::move(tokens));
    if (config.genericize_strings) tokens = genericize_strings(std::move(tokens));
    if (config.rename_identifiers)
        tokens = rename_identifiers(std::move(tokens), analysis.declarations);
    entry.processed_token_count = count_content_tokens(tokens);

    if (config.output_mode == OutputMode::Text) {
        entry.normalized_text = render(
            tokens, config.normalize_whitespace ? RenderMode::Normalized : RenderMode::Verbatim);
    } else {
        for (const Token& t : tokens) {
            if (!is_trivia(t.kind)) entry.normalized_tokens.push_back(t.text);
        }
    }
    return entry;
}

}  // namespace scope
