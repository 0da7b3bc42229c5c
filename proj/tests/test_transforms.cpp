#include <doctest.h>

#include <string>
#include <vector>

#include "scope/transforms.hpp"

using scope::OutputMode;
using scope::process_function;
using scope::TransformConfig;

namespace {

TransformConfig config(bool comments, bool strings, bool rename, bool whitespace,
                       OutputMode mode = OutputMode::Text) {
    TransformConfig c;
    c.strip_comments = comments;
    c.genericize_strings = strings;
    c.rename_identifiers = rename;
    c.normalize_whitespace = whitespace;
    c.output_mode = mode;
    return c;
}

}  // namespace

TEST_CASE("full pipeline on the canonical example") {
    const auto entry = process_function("int f(int a){int b=a;return b;}");
    REQUIRE(entry.status.ok());
    CHECK(entry.normalized_text == "int FUNC_0 ( int VAR_0 ) { int VAR_1 = VAR_0 ; return VAR_1 ; }");
}

TEST_CASE("rename-equivalent snippets normalize identically") {
    const auto pos = process_function("int pos() { return ptr - start; }");
    const auto length = process_function("int length() { return ptr - start; }");
    REQUIRE(pos.status.ok());
    REQUIRE(length.status.ok());
    CHECK(pos.normalized_text == "int FUNC_0 ( ) { return ptr - start ; }");
    CHECK(pos.normalized_text == length.normalized_text);
}

TEST_CASE("string genericization") {
    const auto entry = process_function("int f(){ printf(\"err: %d\", e); return 0; }");
    REQUIRE(entry.status.ok());
    CHECK(entry.normalized_text ==
          "int FUNC_0 ( ) { printf ( \"<STR>\" , e ) ; return 0 ; }");

    // All string literals collapse to the same sentinel; chars are untouched.
    const auto chars = process_function("int f(){ return \"a\" == \"b\" ? 'c' : 'd'; }",
                                        config(true, true, false, true));
    CHECK(chars.normalized_text == "int f ( ) { return \"<STR>\" == \"<STR>\" ? 'c' : 'd' ; }");
}

TEST_CASE("comment removal and whitespace normalization") {
    const char* source = "int  f( )\t{ /* body */ return 1; // tail\n}";
    const auto entry = process_function(source, config(true, true, false, true));
    REQUIRE(entry.status.ok());
    CHECK(entry.normalized_text == "int f ( ) { return 1 ; }");
}

TEST_CASE("identity configuration reproduces the input") {
    const char* source = "int  f( )\t{ /* body */ return \"s\"; // tail\n}";
    const auto entry = process_function(source, config(false, false, false, false));
    REQUIRE(entry.status.ok());
    CHECK(entry.normalized_text == source);
}

TEST_CASE("kept comments appear only in verbatim text") {
    // With whitespace normalization on, rendering drops comments regardless
    // of the comment pass; keeping them is visible in the raw token count
    // and in verbatim output.
    const char* source = "int f() { /*k*/ return 1; }";
    const auto kept = process_function(source, config(false, true, false, false));
    CHECK(kept.normalized_text == source);
    const auto normalized = process_function(source, config(false, true, false, true));
    CHECK(normalized.normalized_text == "int f ( ) { return 1 ; }");
}

TEST_CASE("token output mode") {
    const auto entry = process_function("int f(int a){return a;}",
                                        config(true, true, true, true, OutputMode::Tokens));
    REQUIRE(entry.status.ok());
    const std::vector<std::string> expected = {"int", "FUNC_0", "(",      "int", "VAR_0", ")",
                                               "{",   "return", "VAR_0", ";",   "}"};
    CHECK(entry.normalized_tokens == expected);
    CHECK(entry.normalized_text.empty());

    // Comments never appear in token output, stripped or not.
    const auto kept = process_function("int f(){/*c*/return 0;}",
                                       config(false, true, true, true, OutputMode::Tokens));
    for (const std::string& token : kept.normalized_tokens) CHECK(token != "/*c*/");
}

TEST_CASE("token counts") {
    // raw counts every non-whitespace token including comments; processed
    // counts the output. Removing a comment therefore shrinks the count.
    const auto entry = process_function("int f() { /*c*/ return 0; }");
    REQUIRE(entry.status.ok());
    CHECK(entry.raw_token_count == 10);       // int f ( ) { /*c*/ return 0 ; }
    CHECK(entry.processed_token_count == 9);  // comment gone
    CHECK(entry.processed_token_count < entry.raw_token_count);

    const auto plain = process_function("int f() { return 0; }");
    CHECK(plain.raw_token_count == 9);
    CHECK(plain.processed_token_count == 9);
}

TEST_CASE("error entries carry status and raw count only") {
    const auto entry = process_function("#define A 1\nint f() { return A; }");
    REQUIRE(!entry.status.ok());
    CHECK(*entry.status.error == scope::ParseError::PreprocessorDirective);
    CHECK(entry.raw_token_count > 0);
    CHECK(entry.processed_token_count == 0);
    CHECK(entry.normalized_text.empty());
    CHECK(entry.normalized_tokens.empty());
}

TEST_CASE("directive stripping recovers macro-laden entries") {
    scope::AnalyzeOptions options;
    options.strip_directives = true;
    const auto entry = process_function("#define A 1\nint f() { return A; }", {}, "id", options);
    REQUIRE(entry.status.ok());
    CHECK(entry.normalized_text == "int FUNC_0 ( ) { return A ; }");
}

TEST_CASE("renaming is idempotent") {
    const char* snippet = "int twice(int value) { int result = value + value; return result; }";
    const auto once = process_function(snippet);
    REQUIRE(once.status.ok());
    const auto twice_entry = process_function(once.normalized_text);
    REQUIRE(twice_entry.status.ok());
    CHECK(once.normalized_text == twice_entry.normalized_text);
}

TEST_CASE("canonical names already present keep their slots") {
    // A declared name that is already canonical maps to itself; fresh names
    // fill the free indices in declaration order.
    const auto entry = process_function("int f(int VAR_1, int x) { return VAR_1 + x; }");
    REQUIRE(entry.status.ok());
    CHECK(entry.normalized_text == "int FUNC_0 ( int VAR_1 , int VAR_0 ) { return VAR_1 + VAR_0 ; }");

    const auto zero = process_function("int FUNC_0(int VAR_0) { return VAR_0; }");
    CHECK(zero.normalized_text == "int FUNC_0 ( int VAR_0 ) { return VAR_0 ; }");

    // Leading zeros are not canonical shape.
    const auto padded = process_function("int f(int VAR_01) { return VAR_01; }");
    CHECK(padded.normalized_text == "int FUNC_0 ( int VAR_0 ) { return VAR_0 ; }");

    // Cross-class shapes are renamed like any other identifier.
    const auto crossed = process_function("int FUNC_0(int FUNC_1) { return FUNC_1; }");
    CHECK(crossed.normalized_text == "int FUNC_0 ( int VAR_0 ) { return VAR_0 ; }");
}

TEST_CASE("configuration toggles are independent") {
    const char* source = "int f(int a) { /*c*/ return \"s\" ? a : 0; }";
    SUBCASE("rename only") {
        const auto entry = process_function(source, config(false, false, true, true));
        CHECK(entry.normalized_text ==
              "int FUNC_0 ( int VAR_0 ) { return \"s\" ? VAR_0 : 0 ; }");
    }
    SUBCASE("strings only") {
        const auto entry = process_function(source, config(false, true, false, true));
        CHECK(entry.normalized_text == "int f ( int a ) { return \"<STR>\" ? a : 0 ; }");
    }
    SUBCASE("nothing but whitespace") {
        const auto entry = process_function(source, config(false, false, false, true));
        CHECK(entry.normalized_text == "int f ( int a ) { return \"s\" ? a : 0 ; }");
    }
}

TEST_CASE("canonical name helpers") {
    CHECK(scope::canonical_function_name(0) == "FUNC_0");
    CHECK(scope::canonical_variable_name(12) == "VAR_12");
    CHECK(scope::kStringSentinel == "\"<STR>\"");
}

TEST_CASE("count_content_tokens ignores whitespace only") {
    const auto tokens = scope::tokenize("int x /*c*/ = 1;\n");
    CHECK(scope::count_content_tokens(tokens) == 6);  // int x /*c*/ = 1 ;
}

TEST_CASE("applied config is recorded") {
    const auto entry = process_function("int f() { return 0; }", config(false, false, true, true));
    CHECK(entry.applied_config == config(false, false, true, true));
    CHECK(entry.applied_config != TransformConfig{});
}
