#include "miner/java_parser.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "miner/errors.hpp"

namespace miner::java {

namespace {

enum class Tk { Ident, Number, String, Char, Punct, End };

struct Token {
    Tk kind;
    std::string_view text;
    int line = 1;
    int col = 1;

    bool is(char c) const { return kind == Tk::Punct && text.size() == 1 && text[0] == c; }
    bool is_ident(std::string_view s) const { return kind == Tk::Ident && text == s; }
};

struct Fatal {
    ParseFailure failure;
};

[[noreturn]] void fatal(const Token& at, std::string msg) {
    throw Fatal{{at.line, at.col, std::move(msg)}};
}

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool ident_cont(unsigned char c) { return ident_start(c) || std::isdigit(c); }

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space_and_comments();
            Token t = next();
            out.push_back(t);
            if (t.kind == Tk::End) break;
        }
        return out;
    }

private:
    char cur() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
    char at(std::size_t off) const {
        return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
    }
    bool done() const { return pos_ >= src_.size(); }

    void advance() {
        if (done()) return;
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space_and_comments() {
        while (!done()) {
            char c = cur();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
                advance();
            } else if (c == '/' && at(1) == '/') {
                while (!done() && cur() != '\n') advance();
            } else if (c == '/' && at(1) == '*') {
                const int l = line_, co = col_;
                advance();
                advance();
                while (!done() && !(cur() == '*' && at(1) == '/')) advance();
                if (done()) throw Fatal{{l, co, "unterminated block comment"}};
                advance();
                advance();
            } else {
                return;
            }
        }
    }

    Token make(Tk kind, std::size_t start, int line, int col) {
        return {kind, src_.substr(start, pos_ - start), line, col};
    }

    Token next() {
        if (done()) return {Tk::End, {}, line_, col_};
        const int line = line_, col = col_;
        const std::size_t start = pos_;
        const char c = cur();

        if (ident_start(static_cast<unsigned char>(c))) {
            while (!done() && ident_cont(static_cast<unsigned char>(cur()))) advance();
            return make(Tk::Ident, start, line, col);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (!done()) {
                char d = cur();
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
                    advance();
                } else if (d == '.' && std::isdigit(static_cast<unsigned char>(at(1)))) {
                    advance();
                } else if ((d == '+' || d == '-') && (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E') &&
                           std::isdigit(static_cast<unsigned char>(at(1)))) {
                    advance();
                } else {
                    break;
                }
            }
            return make(Tk::Number, start, line, col);
        }
        if (c == '"') {
            if (at(1) == '"' && at(2) == '"') { // text block
                advance();
                advance();
                advance();
                while (!done() && !(cur() == '"' && at(1) == '"' && at(2) == '"')) {
                    if (cur() == '\\') advance();
                    advance();
                }
                if (done()) throw Fatal{{line, col, "unterminated text block"}};
                advance();
                advance();
                advance();
                return make(Tk::String, start, line, col);
            }
            advance();
            while (!done() && cur() != '"' && cur() != '\n') {
                if (cur() == '\\') advance();
                advance();
            }
            if (done() || cur() != '"') throw Fatal{{line, col, "unterminated string literal"}};
            advance();
            return make(Tk::String, start, line, col);
        }
        if (c == '\'') {
            advance();
            while (!done() && cur() != '\'' && cur() != '\n') {
                if (cur() == '\\') advance();
                advance();
            }
            if (done() || cur() != '\'') throw Fatal{{line, col, "unterminated character literal"}};
            advance();
            return make(Tk::Char, start, line, col);
        }
        if (static_cast<unsigned char>(c) < 0x20) {
            throw Fatal{{line, col, "illegal control character in source"}};
        }
        advance(); // single-character punctuation/operator
        return make(Tk::Punct, start, line, col);
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

bool is_decl_keyword(const Token& t) {
    return t.is_ident("class") || t.is_ident("interface") || t.is_ident("enum") ||
           t.is_ident("record");
}

bool is_primitive(const Token& t) {
    static const char* kPrims[] = {"void", "boolean", "byte",   "short", "int",
                                   "long", "char",    "float",  "double", "var"};
    if (t.kind != Tk::Ident) return false;
    return std::any_of(std::begin(kPrims), std::end(kPrims),
                       [&](const char* p) { return t.text == p; });
}

const char* other_modifier(const Token& t) {
    static const char* kOther[] = {"native", "transient", "volatile", "strictfp", "default", "sealed"};
    if (t.kind != Tk::Ident) return nullptr;
    for (const char* m : kOther)
        if (t.text == m) return m;
    return nullptr;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    AstRoot parse_unit() {
        AstRoot root;
        const std::size_t start = pos_;
        parse_modifiers(); // package-info style leading annotations
        if (peek().is_ident("package")) {
            eat();
            root.ns.name = parse_qname();
            expect(';');
        } else {
            pos_ = start; // they belong to the first declaration
        }
        while (peek().is_ident("import")) {
            eat();
            std::string imp;
            if (peek().is_ident("static")) {
                eat();
                imp = "static ";
            }
            imp += parse_qname();
            if (peek().is('.')) { // trailing ".*"
                eat();
                expect('*');
                imp += ".*";
            } else if (peek().is('*')) {
                eat();
                imp += "*";
            }
            expect(';');
            root.ns.imports.push_back(std::move(imp));
        }
        while (!peek_end()) {
            if (peek().is(';')) {
                eat();
                continue;
            }
            auto mods = parse_modifiers();
            if (is_decl_keyword(peek()) || peek().is('@')) {
                root.ns.declarations.push_back(parse_type_decl(std::move(mods)));
            } else {
                fatal(peek(), "expected type declaration");
            }
        }
        return root;
    }

private:
    const Token& peek(std::size_t off = 0) const {
        const std::size_t i = pos_ + off;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool peek_end() const { return peek().kind == Tk::End; }
    const Token& eat() {
        const Token& t = toks_[std::min(pos_, toks_.size() - 1)];
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    void expect(char c) {
        if (!peek().is(c)) fatal(peek(), std::string("expected '") + c + "'");
        eat();
    }

    std::string parse_qname() {
        if (peek().kind != Tk::Ident) fatal(peek(), "expected identifier");
        std::string name{eat().text};
        while (peek().is('.') && peek(1).kind == Tk::Ident) {
            eat();
            name += '.';
            name += eat().text;
        }
        return name;
    }

    // Consumes a balanced group starting at the current opener token.
    void skip_balanced(char open, char close) {
        const Token& opener = peek();
        expect(open);
        int depth = 1;
        while (depth > 0) {
            if (peek_end()) fatal(opener, std::string("unbalanced '") + open + "'");
            const Token& t = eat();
            if (t.is(open)) ++depth;
            else if (t.is(close)) --depth;
            else if (t.is('(')) { --pos_; skip_balanced('(', ')'); }
            else if (t.is('{')) { --pos_; skip_balanced('{', '}'); }
            else if (t.is('[')) { --pos_; skip_balanced('[', ']'); }
            else if (t.is(')') || t.is('}') || t.is(']'))
                fatal(t, "mismatched closing bracket");
        }
    }

    std::vector<Modifier> parse_modifiers() {
        std::vector<Modifier> mods;
        while (true) {
            const Token& t = peek();
            if (t.is('@')) {
                if (peek(1).is_ident("interface")) return mods; // @interface declaration
                eat();
                Modifier m;
                m.kind = ModifierKind::ANNOTATION;
                m.annotation_name = parse_qname();
                if (m.annotation_name.empty()) fatal(t, "expected annotation name");
                if (peek().is('(')) skip_balanced('(', ')');
                mods.push_back(std::move(m));
            } else if (t.is_ident("public") || t.is_ident("private") || t.is_ident("protected")) {
                Modifier m;
                m.kind = ModifierKind::VISIBILITY;
                m.visibility = std::string(eat().text);
                mods.push_back(std::move(m));
            } else if (t.is_ident("static")) {
                if (peek(1).is('{')) return mods; // static initializer block
                eat();
                mods.push_back({ModifierKind::STATIC, "", "", ""});
            } else if (t.is_ident("final")) {
                eat();
                mods.push_back({ModifierKind::FINAL, "", "", ""});
            } else if (t.is_ident("abstract")) {
                eat();
                mods.push_back({ModifierKind::ABSTRACT, "", "", ""});
            } else if (t.is_ident("synchronized")) {
                if (peek(1).is('(')) return mods; // synchronized statement
                eat();
                mods.push_back({ModifierKind::SYNCHRONIZED, "", "", ""});
            } else if (t.is_ident("non") && peek(1).is('-') && peek(2).is_ident("sealed")) {
                eat();
                eat();
                eat();
                mods.push_back({ModifierKind::OTHER, "", "", "non-sealed"});
            } else if (const char* other = other_modifier(t)) {
                eat();
                mods.push_back({ModifierKind::OTHER, "", "", other});
            } else {
                return mods;
            }
        }
    }

    Declaration parse_type_decl(std::vector<Modifier> mods) {
        Declaration decl;
        decl.modifiers = std::move(mods);
        const Token& kw = peek();
        if (kw.is('@')) {
            eat();
            if (!peek().is_ident("interface")) fatal(peek(), "expected 'interface' after '@'");
            eat();
            decl.kind = DeclarationKind::ANNOTATION_DECL;
        } else if (kw.is_ident("class") || kw.is_ident("record")) {
            eat();
            decl.kind = DeclarationKind::CLASS;
        } else if (kw.is_ident("interface")) {
            eat();
            decl.kind = DeclarationKind::INTERFACE;
        } else if (kw.is_ident("enum")) {
            eat();
            decl.kind = DeclarationKind::ENUM;
        } else {
            fatal(kw, "expected type declaration keyword");
        }
        if (peek().kind != Tk::Ident) fatal(peek(), "expected type name");
        decl.name = std::string(eat().text);

        // Header rest (type params, extends/implements/permits, record
        // components) carries no braces; scan to the body.
        while (!peek().is('{')) {
            if (peek_end()) fatal(peek(), "expected '{' in type declaration");
            if (peek().is('(')) { skip_balanced('(', ')'); continue; } // record components
            eat();
        }
        const Token& body_open = peek();
        eat(); // '{'

        if (decl.kind == DeclarationKind::ENUM) parse_enum_constants(body_open);

        while (!peek().is('}')) {
            if (peek_end()) fatal(body_open, "unbalanced '{' in type body");
            if (peek().is(';')) {
                eat();
                continue;
            }
            parse_member(decl, body_open);
        }
        eat(); // '}'
        return decl;
    }

    void parse_enum_constants(const Token& body_open) {
        // ident [ "(" args ")" ] [ "{" body "}" ] { "," ... } [ ";" ]
        while (true) {
            if (peek_end()) fatal(body_open, "unbalanced '{' in enum body");
            if (peek().is('}')) return; // constants only, no member section
            if (peek().is(';')) {
                eat();
                return;
            }
            if (peek().is('@')) {
                parse_modifiers();
                continue;
            }
            if (peek().kind == Tk::Ident) {
                eat();
                if (peek().is('(')) skip_balanced('(', ')');
                if (peek().is('{')) skip_balanced('{', '}');
                if (peek().is(',')) eat();
                continue;
            }
            return; // something member-like; let the member loop deal with it
        }
    }

    void parse_member(Declaration& decl, const Token& body_open) {
        auto mods = parse_modifiers();
        if (is_decl_keyword(peek()) || (peek().is('@') && peek(1).is_ident("interface"))) {
            decl.nested.push_back(parse_type_decl(std::move(mods)));
            return;
        }
        if (peek().is('{')) { // instance/static initializer
            skip_balanced('{', '}');
            return;
        }
        if (peek().is('<')) skip_generics(); // generic method type parameters

        // Constructor: name equals the declaration name, directly followed
        // by the parameter list.
        if (peek().kind == Tk::Ident && peek().text == decl.name && peek(1).is('(')) {
            Method m;
            m.name = std::string(eat().text);
            m.modifiers = std::move(mods);
            parse_method_rest(m, body_open);
            decl.methods.push_back(std::move(m));
            return;
        }

        if (peek().kind != Tk::Ident) {
            absorb_member(body_open);
            return;
        }
        std::string type = parse_type();
        if (peek().kind != Tk::Ident) {
            absorb_member(body_open);
            return;
        }
        std::string name{eat().text};

        if (peek().is('(')) {
            Method m;
            m.name = std::move(name);
            m.modifiers = std::move(mods);
            m.return_type_name = std::move(type);
            parse_method_rest(m, body_open);
            decl.methods.push_back(std::move(m));
            return;
        }

        // Field declarator list.
        while (true) {
            while (peek().is('[')) skip_balanced('[', ']'); // C-style arrays
            Variable v;
            v.name = std::move(name);
            v.type_name = type;
            v.modifiers = mods;
            if (peek().is('=')) {
                eat();
                absorb_expression_until_separator();
            }
            decl.fields.push_back(std::move(v));
            if (peek().is(',')) {
                eat();
                if (peek().kind != Tk::Ident) {
                    absorb_member(body_open);
                    return;
                }
                name = std::string(eat().text);
                continue;
            }
            if (peek().is(';')) {
                eat();
                return;
            }
            absorb_member(body_open);
            return;
        }
    }

    void parse_method_rest(Method& m, const Token& body_open) {
        const Token& opener = peek();
        expect('(');
        while (!peek().is(')')) {
            if (peek_end()) fatal(opener, "unbalanced '(' in parameter list");
            auto pmods = parse_modifiers();
            if (peek().kind != Tk::Ident) { // absorb odd parameter syntax
                while (!peek().is(',') && !peek().is(')')) {
                    if (peek_end()) fatal(opener, "unbalanced '(' in parameter list");
                    if (peek().is('(')) { skip_balanced('(', ')'); continue; }
                    if (peek().is('<')) { skip_generics(); continue; }
                    eat();
                }
                if (peek().is(',')) eat();
                continue;
            }
            Variable p;
            p.type_name = parse_type();
            p.modifiers = std::move(pmods);
            if (peek().kind == Tk::Ident) p.name = std::string(eat().text);
            while (peek().is('[')) skip_balanced('[', ']');
            m.params.push_back(std::move(p));
            if (peek().is(',')) eat();
        }
        eat(); // ')'

        // throws clause / annotation default: everything up to body or ';'
        while (!peek().is('{') && !peek().is(';')) {
            if (peek_end()) fatal(body_open, "expected method body");
            if (peek().is('(')) { skip_balanced('(', ')'); continue; }
            eat();
        }
        if (peek().is(';')) {
            eat();
            return;
        }
        const Token& brace = peek();
        eat();
        parse_statements_until_close(m.statements, brace);
    }

    // Member recovery: swallow tokens to the end of the construct.
    void absorb_member(const Token& body_open) {
        while (true) {
            if (peek_end()) fatal(body_open, "unbalanced '{' in type body");
            if (peek().is(';')) {
                eat();
                return;
            }
            if (peek().is('}')) return;
            if (peek().is('{')) {
                skip_balanced('{', '}');
                return;
            }
            if (peek().is('(')) {
                skip_balanced('(', ')');
                continue;
            }
            eat();
        }
    }

    void absorb_expression_until_separator() { // stops before ',' ';' '}' at depth 0
        while (true) {
            if (peek_end()) return;
            if (peek().is(',') || peek().is(';') || peek().is('}')) return;
            if (peek().is('(')) { skip_balanced('(', ')'); continue; }
            if (peek().is('{')) { skip_balanced('{', '}'); continue; }
            if (peek().is('[')) { skip_balanced('[', ']'); continue; }
            eat();
        }
    }

    void skip_generics() {
        const Token& opener = peek();
        expect('<');
        int depth = 1;
        while (depth > 0) {
            if (peek_end()) fatal(opener, "unbalanced '<'");
            const Token& t = eat();
            if (t.is('<')) ++depth;
            else if (t.is('>')) --depth;
            else if (t.is('(') || t.is('{') || t.is(';')) fatal(opener, "unbalanced '<'");
        }
    }

    std::string parse_type() {
        std::string text;
        if (is_primitive(peek())) {
            text = std::string(eat().text);
        } else {
            text = parse_qname();
        }
        if (peek().is('<')) {
            const std::size_t start = pos_;
            skip_generics();
            for (std::size_t i = start; i < pos_; ++i) text += std::string(toks_[i].text);
        }
        while (peek().is('[') && peek(1).is(']')) {
            eat();
            eat();
            text += "[]";
        }
        if (peek().is('.') && peek(1).is('.') && peek(2).is('.')) { // varargs
            eat();
            eat();
            eat();
            text += "...";
        }
        return text;
    }

    void parse_statements_until_close(std::vector<Statement>& out, const Token& opener) {
        while (!peek().is('}')) {
            if (peek_end()) fatal(opener, "unbalanced '{'");
            if (auto s = parse_statement()) out.push_back(std::move(*s));
        }
        eat(); // '}'
    }

    std::optional<Statement> parse_statement() {
        const Token& t = peek();
        if (t.is(';')) {
            eat();
            return std::nullopt;
        }
        if (t.is('{')) {
            Statement s;
            s.kind = StatementKind::BLOCK;
            eat();
            parse_statements_until_close(s.statements, t);
            return s;
        }
        if (t.is_ident("if")) {
            eat();
            Statement s;
            s.kind = StatementKind::IF;
            parse_paren_expressions(s.expressions);
            if (auto body = parse_statement()) s.statements.push_back(std::move(*body));
            if (peek().is_ident("else")) {
                eat();
                if (auto e = parse_statement()) s.statements.push_back(std::move(*e));
            }
            return s;
        }
        if (t.is_ident("for")) {
            eat();
            Statement s;
            s.kind = StatementKind::FOR;
            parse_paren_expressions(s.expressions);
            if (auto body = parse_statement()) s.statements.push_back(std::move(*body));
            return s;
        }
        if (t.is_ident("while")) {
            eat();
            Statement s;
            s.kind = StatementKind::WHILE;
            parse_paren_expressions(s.expressions);
            if (auto body = parse_statement()) s.statements.push_back(std::move(*body));
            return s;
        }
        if (t.is_ident("do")) {
            eat();
            Statement s;
            s.kind = StatementKind::OTHER;
            if (auto body = parse_statement()) s.statements.push_back(std::move(*body));
            if (peek().is_ident("while")) {
                eat();
                parse_paren_expressions(s.expressions);
            }
            if (peek().is(';')) eat();
            return s;
        }
        if (t.is_ident("return")) {
            eat();
            Statement s;
            s.kind = StatementKind::RETURN;
            scan_expressions_until_semi(s.expressions);
            return s;
        }
        if (t.is_ident("try")) {
            eat();
            Statement s;
            s.kind = StatementKind::OTHER;
            if (peek().is('(')) parse_paren_expressions(s.expressions); // resources
            if (peek().is('{')) {
                if (auto b = parse_statement()) s.statements.push_back(std::move(*b));
            }
            while (peek().is_ident("catch") || peek().is_ident("finally")) {
                eat();
                if (peek().is('(')) skip_balanced('(', ')');
                if (peek().is('{'))
                    if (auto b = parse_statement()) s.statements.push_back(std::move(*b));
            }
            return s;
        }
        if (t.is_ident("switch")) {
            eat();
            Statement s;
            s.kind = StatementKind::OTHER;
            if (peek().is('(')) parse_paren_expressions(s.expressions);
            if (peek().is('{')) skip_balanced('{', '}');
            return s;
        }
        if (t.is_ident("synchronized") && peek(1).is('(')) {
            eat();
            Statement s;
            s.kind = StatementKind::OTHER;
            parse_paren_expressions(s.expressions);
            if (auto b = parse_statement()) s.statements.push_back(std::move(*b));
            return s;
        }
        if (t.is_ident("throw") || t.is_ident("yield") || t.is_ident("assert")) {
            eat();
            Statement s;
            s.kind = StatementKind::OTHER;
            scan_expressions_until_semi(s.expressions);
            return s;
        }
        if (t.is_ident("break") || t.is_ident("continue")) {
            eat();
            if (peek().kind == Tk::Ident) eat(); // label
            if (peek().is(';')) eat();
            Statement s;
            s.kind = StatementKind::OTHER;
            return s;
        }
        // label: statement
        if (t.kind == Tk::Ident && peek(1).is(':') && !peek(2).is(':')) {
            eat();
            eat();
            return parse_statement();
        }
        // Local declaration or expression statement.
        Statement s;
        s.kind = StatementKind::EXPR;
        scan_expressions_until_semi(s.expressions);
        return s;
    }

    void parse_paren_expressions(std::vector<Expression>& out) {
        if (!peek().is('(')) return;
        const Token& opener = peek();
        eat();
        scan_expressions(out, opener, /*closer=*/')');
        eat(); // ')'
    }

    // Scans one statement's worth of tokens, collecting CALL and LITERAL
    // expressions. Stops after ';' at depth 0 or before a '}' closing the
    // enclosing block.
    void scan_expressions_until_semi(std::vector<Expression>& out) {
        while (true) {
            const Token& t = peek();
            if (t.kind == Tk::End) return;
            if (t.is(';')) {
                eat();
                return;
            }
            if (t.is('}')) return;
            scan_one(out);
        }
    }

    void scan_expressions(std::vector<Expression>& out, const Token& opener, char closer) {
        while (true) {
            const Token& t = peek();
            if (t.kind == Tk::End) fatal(opener, std::string("unbalanced '") + opener.text[0] + "'");
            if (t.is(closer)) return;
            if (t.is(')') || t.is('}') || t.is(']')) fatal(t, "mismatched closing bracket");
            scan_one(out);
        }
    }

    // Consumes one token (or one call/group) appending extracted expressions.
    void scan_one(std::vector<Expression>& out) {
        const Token& t = peek();
        if (t.kind == Tk::Ident) {
            if (t.is_ident("true") || t.is_ident("false") || t.is_ident("null")) {
                out.push_back({ExpressionKind::LITERAL, "", std::string(eat().text), {}});
                return;
            }
            if (t.is_ident("new")) {
                eat();
                if (peek().kind != Tk::Ident) return;
                std::string type = parse_qname();
                if (peek().is('<')) skip_generics_lenient();
                if (peek().is('(')) {
                    Expression call;
                    call.kind = ExpressionKind::CALL;
                    call.method_name = last_segment(type);
                    const Token& opener = peek();
                    eat();
                    scan_expressions(call.expressions, opener, ')');
                    eat();
                    out.push_back(std::move(call));
                }
                return;
            }
            std::string qname = parse_qname();
            if (peek().is('(')) {
                Expression call;
                call.kind = ExpressionKind::CALL;
                call.method_name = last_segment(qname);
                const Token& opener = peek();
                eat();
                scan_expressions(call.expressions, opener, ')');
                eat();
                out.push_back(std::move(call));
            }
            return;
        }
        if (t.kind == Tk::Number || t.kind == Tk::String || t.kind == Tk::Char) {
            out.push_back({ExpressionKind::LITERAL, "", std::string(eat().text), {}});
            return;
        }
        if (t.is('(')) {
            const Token& opener = peek();
            eat();
            scan_expressions(out, opener, ')');
            eat();
            return;
        }
        if (t.is('{')) {
            const Token& opener = peek();
            eat();
            scan_expressions(out, opener, '}');
            eat();
            return;
        }
        if (t.is('[')) {
            const Token& opener = peek();
            eat();
            scan_expressions(out, opener, ']');
            eat();
            return;
        }
        if (t.is(')') || t.is('}') || t.is(']')) fatal(t, "mismatched closing bracket");
        eat();
    }

    // '<' in expression context is usually a comparison; only skip as
    // generics when it balances before any ';' or '{'.
    void skip_generics_lenient() {
        const std::size_t save = pos_;
        eat();
        int depth = 1;
        while (depth > 0) {
            if (peek_end() || peek().is(';') || peek().is('{')) {
                pos_ = save;
                return;
            }
            const Token& t = eat();
            if (t.is('<')) ++depth;
            else if (t.is('>')) --depth;
        }
    }

    static std::string last_segment(const std::string& qname) {
        auto dot = qname.find_last_of('.');
        return dot == std::string::npos ? qname : qname.substr(dot + 1);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

} // namespace

ParseResult parse_source(std::string_view content, FileKind kind) {
    if (kind != FileKind::SOURCE_JAVA)
        throw InputError("parse_source called on a non-java file kind");
    ParseResult result;
    try {
        Lexer lexer(content);
        Parser parser(lexer.run());
        result.ast = parser.parse_unit();
    } catch (const Fatal& f) {
        result.failure = f.failure;
    }
    return result;
}

} // namespace miner::java
