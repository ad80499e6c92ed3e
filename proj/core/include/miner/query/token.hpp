#pragma once

#include <string>
#include <vector>

namespace miner::query {

struct Pos {
    int line = 1;
    int col = 1;
};

enum class TokenKind { IDENT, INT_LIT, FLOAT_LIT, STRING_LIT, KEYWORD, OPERATOR, PUNCT, END };

const char* to_string(TokenKind k);

struct Token {
    TokenKind kind = TokenKind::END;
    std::string text;
    int line = 1;
    int col = 1;

    Pos pos() const { return {line, col}; }
    bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
    bool is_keyword(std::string_view t) const { return is(TokenKind::KEYWORD, t); }
    bool is_punct(std::string_view t) const { return is(TokenKind::PUNCT, t); }
    bool is_op(std::string_view t) const { return is(TokenKind::OPERATOR, t); }
};

} // namespace miner::query
