#include "miner/query/parser.hpp"

#include <charconv>

#include "miner/query/diagnostics.hpp"
#include "miner/query/lexer.hpp"

namespace miner::query {

namespace {

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Program parse() {
        Program prog;
        // { outputDecl }: IDENT ':' 'output' ...
        while (peek().kind == TokenKind::IDENT && peek(1).is_punct(":") &&
               peek(2).is_keyword("output")) {
            OutputDecl decl = parse_output_decl();
            for (const auto& prev : prog.outputs)
                if (prev.name == decl.name)
                    error(decl.pos, "duplicate output name '" + decl.name + "' (first declared at " +
                                        std::to_string(prev.pos.line) + ":" +
                                        std::to_string(prev.pos.col) + ")");
            prog.outputs.push_back(std::move(decl));
        }
        while (!peek_end()) prog.statements.push_back(parse_statement());
        return prog;
    }

private:
    [[noreturn]] void error(Pos pos, std::string msg) { throw CompileError({{pos, std::move(msg)}}); }

    [[noreturn]] void expected(const char* what) {
        const Token& t = peek();
        std::string got = t.kind == TokenKind::END ? "end of input" : "'" + t.text + "'";
        error(t.pos(), std::string("expected ") + what + ", got " + got);
    }

    const Token& peek(std::size_t off = 0) const {
        const std::size_t i = pos_ + off;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool peek_end() const { return peek().kind == TokenKind::END; }
    const Token& eat() {
        const Token& t = toks_[std::min(pos_, toks_.size() - 1)];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool accept_punct(const char* p) {
        if (peek().is_punct(p)) {
            eat();
            return true;
        }
        return false;
    }
    bool accept_op(const char* p) {
        if (peek().is_op(p)) {
            eat();
            return true;
        }
        return false;
    }
    bool accept_keyword(const char* k) {
        if (peek().is_keyword(k)) {
            eat();
            return true;
        }
        return false;
    }
    void expect_punct(const char* p) {
        if (!accept_punct(p)) expected(("'" + std::string(p) + "'").c_str());
    }
    void expect_op(const char* p) {
        if (!accept_op(p)) expected(("'" + std::string(p) + "'").c_str());
    }
    std::string expect_ident(const char* what) {
        if (peek().kind != TokenKind::IDENT) expected(what);
        return eat().text;
    }

    OutputDecl parse_output_decl() {
        OutputDecl decl;
        decl.pos = peek().pos();
        decl.name = expect_ident("output name");
        expect_punct(":");
        if (!accept_keyword("output")) expected("'output'");

        if (accept_keyword("sum")) decl.agg = AggKind::SUM;
        else if (accept_keyword("mean")) decl.agg = AggKind::MEAN;
        else if (accept_keyword("collection")) decl.agg = AggKind::COLLECTION;
        else if (accept_keyword("set")) decl.agg = AggKind::SET;
        else if (accept_keyword("top")) {
            decl.agg = AggKind::TOP;
            expect_punct("(");
            if (peek().kind != TokenKind::INT_LIT) expected("entry count");
            decl.top_n = parse_int_text(eat());
            if (decl.top_n <= 0) error(decl.pos, "top aggregator needs a positive entry count");
            expect_punct(")");
        } else {
            expected("aggregator kind (sum, mean, collection, set, top)");
        }

        while (accept_punct("[")) {
            std::string label = expect_ident("index label");
            expect_punct(":");
            Type t = parse_scalar_type();
            decl.indices.emplace_back(std::move(label), std::move(t));
            expect_punct("]");
        }
        if (!accept_keyword("of")) expected("'of'");
        decl.value_type = parse_scalar_type();
        if (accept_keyword("weight")) decl.weight_type = parse_scalar_type();
        expect_punct(";");
        return decl;
    }

    Type parse_scalar_type() {
        if (accept_keyword("int")) return Type::int_();
        if (accept_keyword("float")) return Type::float_();
        if (accept_keyword("string")) return Type::string_();
        if (accept_keyword("bool")) return Type::bool_();
        if (accept_keyword("time")) return Type::time_();
        expected("scalar type (int, float, string, bool, time)");
    }

    Type parse_type() {
        if (accept_keyword("array")) {
            if (!accept_keyword("of")) expected("'of'");
            return Type::array(parse_type());
        }
        if (peek().kind == TokenKind::IDENT) return Type::node(eat().text); // schema type name
        return parse_scalar_type();
    }

    std::int64_t parse_int_text(const Token& t) {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size())
            error(t.pos(), "integer literal out of range: " + t.text);
        return v;
    }

    StmtPtr parse_statement() {
        const Token& t = peek();

        if (t.is_punct("{")) {
            auto s = std::make_unique<Stmt>();
            s->kind = Stmt::Kind::Block;
            s->pos = t.pos();
            eat();
            while (!peek().is_punct("}")) {
                if (peek_end()) expected("'}'");
                s->stmts.push_back(parse_statement());
            }
            eat();
            return s;
        }
        if (t.is_keyword("if")) {
            auto s = std::make_unique<Stmt>();
            s->kind = Stmt::Kind::If;
            s->pos = t.pos();
            eat();
            expect_punct("(");
            s->cond = parse_expr();
            expect_punct(")");
            s->then_branch = parse_statement();
            if (accept_keyword("else")) s->else_branch = parse_statement();
            return s;
        }
        if (t.is_keyword("foreach")) {
            auto s = std::make_unique<Stmt>();
            s->kind = Stmt::Kind::Foreach;
            s->pos = t.pos();
            eat();
            expect_punct("(");
            s->name = expect_ident("loop variable");
            expect_punct(":");
            s->declared_type = parse_type();
            expect_punct(";");
            s->cond = parse_expr();
            expect_punct(")");
            s->body = parse_statement();
            return s;
        }
        if (t.is_keyword("stop")) {
            auto s = std::make_unique<Stmt>();
            s->kind = Stmt::Kind::Stop;
            s->pos = t.pos();
            eat();
            expect_punct(";");
            return s;
        }
        if (t.is_keyword("visit")) {
            auto s = parse_visit_call();
            expect_punct(";");
            return s;
        }
        if (t.kind == TokenKind::IDENT) {
            // Emission: IDENT { "[" expr "]" } "<<" — decided by lookahead
            // with bounded speculation over the index brackets.
            if (peek(1).is_op("<<")) return parse_emit();
            if (peek(1).is_punct("[")) {
                const std::size_t save = pos_;
                bool is_emit = false;
                try {
                    eat();
                    while (peek().is_punct("[")) {
                        eat();
                        (void)parse_expr();
                        expect_punct("]");
                    }
                    is_emit = peek().is_op("<<");
                } catch (const CompileError&) {
                    is_emit = false;
                }
                pos_ = save;
                if (is_emit) return parse_emit();
            }
            if (peek(1).is_op(":=") || peek(1).is_punct(":")) return parse_var_decl();
        }

        // expression statement
        auto s = std::make_unique<Stmt>();
        s->kind = Stmt::Kind::ExprStmt;
        s->pos = t.pos();
        s->expr = parse_expr();
        expect_punct(";");
        return s;
    }

    StmtPtr parse_var_decl() {
        auto s = std::make_unique<Stmt>();
        s->kind = Stmt::Kind::VarDecl;
        s->pos = peek().pos();
        s->name = expect_ident("variable name");
        if (accept_op(":=")) {
            s->init = parse_expr();
        } else {
            expect_punct(":");
            s->declared_type = parse_type();
            if (accept_op("=")) s->init = parse_expr();
        }
        expect_punct(";");
        return s;
    }

    StmtPtr parse_emit() {
        auto s = std::make_unique<Stmt>();
        s->kind = Stmt::Kind::Emit;
        s->pos = peek().pos();
        s->output = expect_ident("output name");
        while (accept_punct("[")) {
            s->indices.push_back(parse_expr());
            expect_punct("]");
        }
        expect_op("<<");
        s->value = parse_expr();
        if (accept_keyword("weight")) s->weight = parse_expr();
        expect_punct(";");
        return s;
    }

    StmtPtr parse_visit_call() {
        auto s = std::make_unique<Stmt>();
        s->kind = Stmt::Kind::Visit;
        s->pos = peek().pos();
        eat(); // 'visit'
        expect_punct("(");
        s->target = parse_expr();
        if (accept_punct(",")) s->visitor_expr = parse_expr();
        expect_punct(")");
        return s;
    }

    // Precedence climbing. Levels, loosest first:
    //   ||   &&   == !=   < <= > >=   + -   * /   unary ! -
    ExprPtr parse_expr() { return parse_binary(0); }

    struct Level {
        const char* ops[5];
    };
    static constexpr Level kLevels[] = {
        {{"||", nullptr}},
        {{"&&", nullptr}},
        {{"==", "!=", nullptr}},
        {{"<", "<=", ">", ">=", nullptr}},
        {{"+", "-", nullptr}},
        {{"*", "/", nullptr}},
    };
    static constexpr int kNumLevels = 6;

    ExprPtr parse_binary(int level) {
        if (level >= kNumLevels) return parse_unary();
        ExprPtr lhs = parse_binary(level + 1);
        while (true) {
            const char* matched = nullptr;
            for (const char* const* op = kLevels[level].ops; *op; ++op)
                if (peek().is_op(*op)) {
                    matched = *op;
                    break;
                }
            if (!matched) return lhs;
            Pos pos = peek().pos();
            eat();
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::Binary;
            e->pos = pos;
            e->name = matched;
            e->lhs = std::move(lhs);
            e->rhs = parse_binary(level + 1);
            lhs = std::move(e);
        }
    }

    ExprPtr parse_unary() {
        if (peek().is_op("!") || peek().is_op("-")) {
            auto e = std::make_unique<Expr>();
            e->kind = Expr::Kind::Unary;
            e->pos = peek().pos();
            e->name = eat().text;
            e->lhs = parse_unary();
            return e;
        }
        return parse_postfix();
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_primary();
        while (true) {
            if (peek().is_punct(".")) {
                Pos pos = peek().pos();
                eat();
                auto m = std::make_unique<Expr>();
                m->kind = Expr::Kind::Member;
                m->pos = pos;
                m->name = expect_ident("field name");
                m->lhs = std::move(e);
                e = std::move(m);
            } else if (peek().is_punct("[")) {
                Pos pos = peek().pos();
                eat();
                auto ix = std::make_unique<Expr>();
                ix->kind = Expr::Kind::Index;
                ix->pos = pos;
                ix->lhs = std::move(e);
                ix->rhs = parse_expr();
                expect_punct("]");
                e = std::move(ix);
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_primary() {
        const Token& t = peek();
        auto e = std::make_unique<Expr>();
        e->pos = t.pos();

        switch (t.kind) {
        case TokenKind::INT_LIT:
            e->kind = Expr::Kind::IntLit;
            e->int_val = parse_int_text(t);
            eat();
            return e;
        case TokenKind::FLOAT_LIT:
            e->kind = Expr::Kind::FloatLit;
            e->float_val = std::strtod(t.text.c_str(), nullptr);
            eat();
            return e;
        case TokenKind::STRING_LIT:
            e->kind = Expr::Kind::StringLit;
            e->str_val = t.text;
            eat();
            return e;
        default:
            break;
        }
        if (t.is_keyword("true") || t.is_keyword("false")) {
            e->kind = Expr::Kind::BoolLit;
            e->bool_val = t.text == "true";
            eat();
            return e;
        }
        if (t.is_keyword("visitor")) return parse_visitor_literal();
        if (t.is_punct("(")) {
            eat();
            ExprPtr inner = parse_expr();
            expect_punct(")");
            return inner;
        }
        if (t.kind == TokenKind::IDENT) {
            if (peek(1).is_punct("(")) {
                e->kind = Expr::Kind::Call;
                e->name = eat().text;
                eat(); // '('
                if (!peek().is_punct(")")) {
                    e->args.push_back(parse_expr());
                    while (accept_punct(",")) e->args.push_back(parse_expr());
                }
                expect_punct(")");
                return e;
            }
            e->kind = Expr::Kind::Ident;
            e->name = eat().text;
            return e;
        }
        expected("expression");
    }

    ExprPtr parse_visitor_literal() {
        auto e = std::make_unique<Expr>();
        e->kind = Expr::Kind::VisitorLit;
        e->pos = peek().pos();
        eat(); // 'visitor'
        expect_punct("{");
        while (!peek().is_punct("}")) {
            if (peek_end()) expected("'}'");
            VisitorClause clause;
            clause.pos = peek().pos();
            if (accept_keyword("before")) clause.before = true;
            else if (accept_keyword("after")) clause.before = false;
            else expected("'before' or 'after'");

            if (peek().kind == TokenKind::IDENT && peek().text == "_" && peek(1).is_op("->")) {
                eat(); // wildcard, no binder
            } else {
                clause.binder = expect_ident("binder name");
                expect_punct(":");
                clause.node_type = expect_ident("node type");
            }
            expect_op("->");
            clause.body = parse_statement();
            e->clauses.push_back(std::move(clause));
        }
        eat(); // '}'
        return e;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

} // namespace

Program parse_query(std::vector<Token> tokens) {
    if (tokens.empty() || tokens.back().kind != TokenKind::END)
        throw CompileError({{{1, 1}, "token stream must end with EOF"}});
    Parser parser(std::move(tokens));
    return parser.parse();
}

Program parse_query_text(std::string_view text) { return parse_query(lex(text)); }

} // namespace miner::query
