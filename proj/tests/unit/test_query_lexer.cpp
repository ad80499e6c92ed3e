#include <doctest.h>

#include "fig2.hpp"
#include "miner/query/diagnostics.hpp"
#include "miner/query/lexer.hpp"

using namespace miner::query;

namespace {

std::vector<std::pair<TokenKind, std::string>> kinds_and_text(const std::string& src) {
    std::vector<std::pair<TokenKind, std::string>> out;
    for (const auto& t : lex(src)) out.emplace_back(t.kind, t.text);
    return out;
}

} // namespace

TEST_CASE("empty input lexes to EOF only") {
    auto toks = lex("");
    REQUIRE(toks.size() == 1);
    CHECK(toks[0].kind == TokenKind::END);
}

TEST_CASE("the emission statement lexes to the documented token sequence") {
    using K = TokenKind;
    auto got = kinds_and_text("o[input.id] << 1;");
    std::vector<std::pair<K, std::string>> want{
        {K::IDENT, "o"},     {K::PUNCT, "["},    {K::IDENT, "input"}, {K::PUNCT, "."},
        {K::IDENT, "id"},    {K::PUNCT, "]"},    {K::OPERATOR, "<<"}, {K::INT_LIT, "1"},
        {K::PUNCT, ";"},     {K::END, ""},
    };
    CHECK(got == want);
}

TEST_CASE("unterminated string is a lexical error at its start") {
    try {
        lex("\"abc");
        FAIL("expected CompileError");
    } catch (const CompileError& e) {
        REQUIRE(e.diagnostics().size() == 1);
        CHECK(e.diagnostics()[0].pos.line == 1);
        CHECK(e.diagnostics()[0].pos.col == 1);
    }
}

TEST_CASE("comments are skipped to end of line") {
    auto got = kinds_and_text("x # comment with \"stuff\" <<\ny");
    REQUIRE(got.size() == 3);
    CHECK(got[0].second == "x");
    CHECK(got[1].second == "y");
}

TEST_CASE("string escapes") {
    auto toks = lex(R"("a\"b\\c\nd\te")");
    REQUIRE(toks.size() == 2);
    CHECK(toks[0].kind == TokenKind::STRING_LIT);
    CHECK(toks[0].text == "a\"b\\c\nd\te");
    CHECK_THROWS_AS(lex(R"("\q")"), CompileError);
}

TEST_CASE("longest match for operators") {
    auto got = kinds_and_text("a << b < c <= d := e = f == g");
    std::vector<std::string> ops;
    for (const auto& [k, t] : got)
        if (k == TokenKind::OPERATOR) ops.push_back(t);
    CHECK(ops == std::vector<std::string>{"<<", "<", "<=", ":=", "=", "=="});
}

TEST_CASE("numbers split into int and float literals") {
    auto got = kinds_and_text("1 23 4.5 0.25 1e9 2.5e-3 7.");
    CHECK(got[0].first == TokenKind::INT_LIT);
    CHECK(got[2].first == TokenKind::FLOAT_LIT);
    CHECK(got[3].first == TokenKind::FLOAT_LIT);
    CHECK(got[4].first == TokenKind::FLOAT_LIT);
    CHECK(got[5].first == TokenKind::FLOAT_LIT);
    CHECK(got[6].first == TokenKind::INT_LIT); // "7" then "."
    CHECK(got[7].first == TokenKind::PUNCT);
}

TEST_CASE("keywords are reserved, identifiers are not") {
    auto got = kinds_and_text("output of sum visitor snapshot getsnapshot def input");
    CHECK(got[0].first == TokenKind::KEYWORD);
    CHECK(got[1].first == TokenKind::KEYWORD);
    CHECK(got[2].first == TokenKind::KEYWORD);
    CHECK(got[3].first == TokenKind::KEYWORD);
    CHECK(got[4].first == TokenKind::IDENT);
    CHECK(got[5].first == TokenKind::IDENT); // getsnapshot is a builtin, not a keyword
    CHECK(got[6].first == TokenKind::IDENT); // def too
    CHECK(got[7].first == TokenKind::IDENT); // input is an implicit binding
}

TEST_CASE("positions point at the first character") {
    auto toks = lex("ab\n  cd");
    CHECK(toks[0].line == 1);
    CHECK(toks[0].col == 1);
    CHECK(toks[1].line == 2);
    CHECK(toks[1].col == 3);
}

TEST_CASE("illegal characters carry their position") {
    try {
        lex("a $ b");
        FAIL("expected CompileError");
    } catch (const CompileError& e) {
        CHECK(e.diagnostics()[0].pos.col == 3);
    }
}

TEST_CASE("the whole annotation query lexes, whitespace-insensitively") {
    auto a = lex(minertest::kAnnotationQuery);
    // normalize whitespace: collapse the query onto fewer lines
    std::string squashed = minertest::kAnnotationQuery;
    for (char& c : squashed)
        if (c == '\n') c = ' ';
    auto b = lex(squashed);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].kind == b[i].kind);
        CHECK(a[i].text == b[i].text);
    }
}

TEST_CASE("diagnostic formatting is file:line:col: error: message") {
    std::string text = format_diagnostics("q.boa", {{{3, 7}, "bad things"}});
    CHECK(text == "q.boa:3:7: error: bad things\n");
}
