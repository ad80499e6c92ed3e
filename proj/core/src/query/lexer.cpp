#include "miner/query/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>

#include "miner/query/diagnostics.hpp"

namespace miner::query {

namespace {

constexpr std::array kKeywords = {
    "output", "of",    "weight",  "sum",    "mean",   "collection", "set",  "top",
    "if",     "else",  "foreach", "stop",   "visit",  "visitor",    "before", "after",
    "int",    "float", "string",  "bool",   "time",   "array",      "true", "false",
};

constexpr std::array kTwoCharOps = {"||", "&&", "==", "!=", "<=", ">=", "<<", ":=", "->"};
constexpr const char* kOneCharOps = "<>+-*/!=";
constexpr const char* kPunct = "()[]{};,.:";

[[noreturn]] void lex_error(int line, int col, std::string msg) {
    throw CompileError({{{line, col}, std::move(msg)}});
}

} // namespace

const char* to_string(TokenKind k) {
    switch (k) {
    case TokenKind::IDENT: return "IDENT";
    case TokenKind::INT_LIT: return "INT_LIT";
    case TokenKind::FLOAT_LIT: return "FLOAT_LIT";
    case TokenKind::STRING_LIT: return "STRING_LIT";
    case TokenKind::KEYWORD: return "KEYWORD";
    case TokenKind::OPERATOR: return "OPERATOR";
    case TokenKind::PUNCT: return "PUNCT";
    case TokenKind::END: return "EOF";
    }
    return "?";
}

bool is_keyword(std::string_view word) {
    return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> out;
    std::size_t pos = 0;
    int line = 1, col = 1;

    auto cur = [&]() -> char { return pos < text.size() ? text[pos] : '\0'; };
    auto at = [&](std::size_t off) -> char {
        return pos + off < text.size() ? text[pos + off] : '\0';
    };
    auto advance = [&] {
        if (pos < text.size()) {
            if (text[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
    };

    while (pos < text.size()) {
        const char c = cur();
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance();
            continue;
        }
        if (c == '#') {
            while (pos < text.size() && cur() != '\n') advance();
            continue;
        }

        const int tline = line, tcol = col;
        const std::size_t start = pos;

        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_'))
                advance();
            std::string word(text.substr(start, pos - start));
            out.push_back({is_keyword(word) ? TokenKind::KEYWORD : TokenKind::IDENT,
                           std::move(word), tline, tcol});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (std::isdigit(static_cast<unsigned char>(cur()))) advance();
            bool is_float = false;
            if (cur() == '.' && std::isdigit(static_cast<unsigned char>(at(1)))) {
                is_float = true;
                advance();
                while (std::isdigit(static_cast<unsigned char>(cur()))) advance();
            }
            if (cur() == 'e' || cur() == 'E') {
                std::size_t exp_off = 1;
                if (at(exp_off) == '+' || at(exp_off) == '-') ++exp_off;
                if (std::isdigit(static_cast<unsigned char>(at(exp_off)))) {
                    is_float = true;
                    for (std::size_t i = 0; i <= exp_off; ++i) advance();
                    while (std::isdigit(static_cast<unsigned char>(cur()))) advance();
                }
            }
            out.push_back({is_float ? TokenKind::FLOAT_LIT : TokenKind::INT_LIT,
                           std::string(text.substr(start, pos - start)), tline, tcol});
            continue;
        }
        if (c == '"') {
            advance();
            std::string value;
            while (true) {
                if (pos >= text.size() || cur() == '\n')
                    lex_error(tline, tcol, "unterminated string literal");
                const char d = cur();
                if (d == '"') {
                    advance();
                    break;
                }
                if (d == '\\') {
                    advance();
                    switch (cur()) {
                    case '"': value += '"'; break;
                    case '\\': value += '\\'; break;
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    default:
                        lex_error(line, col, std::string("unknown escape sequence '\\") + cur() +
                                                 "'");
                    }
                    advance();
                    continue;
                }
                value += d;
                advance();
            }
            out.push_back({TokenKind::STRING_LIT, std::move(value), tline, tcol});
            continue;
        }

        bool matched = false;
        for (const char* op : kTwoCharOps) {
            if (c == op[0] && at(1) == op[1]) {
                advance();
                advance();
                out.push_back({TokenKind::OPERATOR, op, tline, tcol});
                matched = true;
                break;
            }
        }
        if (matched) continue;

        if (std::strchr(kOneCharOps, c)) {
            advance();
            out.push_back({TokenKind::OPERATOR, std::string(1, c), tline, tcol});
            continue;
        }
        if (std::strchr(kPunct, c)) {
            advance();
            out.push_back({TokenKind::PUNCT, std::string(1, c), tline, tcol});
            continue;
        }
        lex_error(tline, tcol, std::string("illegal character '") + c + "'");
    }

    out.push_back({TokenKind::END, "", line, col});
    return out;
}

std::string format_diagnostics(const std::string& file, const std::vector<Diagnostic>& diags) {
    std::string out;
    for (const auto& d : diags) {
        out += file + ":" + std::to_string(d.pos.line) + ":" + std::to_string(d.pos.col) +
               ": error: " + d.message + "\n";
    }
    return out;
}

} // namespace miner::query
