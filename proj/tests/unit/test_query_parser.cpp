#include <doctest.h>

#include "fig2.hpp"
#include "miner/query/diagnostics.hpp"
#include "miner/query/lexer.hpp"
#include "miner/query/parser.hpp"
#include "miner/query/printer.hpp"

using namespace miner::query;

namespace {

Pos error_pos(const std::string& src) {
    try {
        parse_query_text(src);
    } catch (const CompileError& e) {
        REQUIRE(!e.diagnostics().empty());
        return e.diagnostics()[0].pos;
    }
    FAIL("expected CompileError");
    return {};
}

} // namespace

TEST_CASE("empty program parses to nothing") {
    Program p = parse_query_text("");
    CHECK(p.outputs.empty());
    CHECK(p.statements.empty());
}

TEST_CASE("the annotation query parses to the documented structure") {
    Program p = parse_query_text(minertest::kAnnotationQuery);

    REQUIRE(p.outputs.size() == 1);
    const OutputDecl& o = p.outputs[0];
    CHECK(o.name == "o");
    CHECK(o.agg == AggKind::SUM);
    REQUIRE(o.indices.size() == 1);
    CHECK(o.indices[0].first == "project");
    CHECK(o.indices[0].second == Type::string_());
    CHECK(o.value_type == Type::int_());
    CHECK(!o.weight_type.has_value());

    REQUIRE(p.statements.size() == 1);
    const Stmt& visit = *p.statements[0];
    REQUIRE(visit.kind == Stmt::Kind::Visit);
    REQUIRE(visit.target->kind == Expr::Kind::Ident);
    CHECK(visit.target->name == "input");
    REQUIRE(visit.visitor_expr);
    REQUIRE(visit.visitor_expr->kind == Expr::Kind::VisitorLit);

    const auto& clauses = visit.visitor_expr->clauses;
    REQUIRE(clauses.size() == 2);
    CHECK(clauses[0].before);
    CHECK(clauses[0].binder == "node");
    CHECK(clauses[0].node_type == "CodeRepository");
    CHECK(clauses[1].before);
    CHECK(clauses[1].binder == "mod");
    CHECK(clauses[1].node_type == "Modifier");

    // first clause: { snapshot := ...; foreach ...; stop; }
    const Stmt& body0 = *clauses[0].body;
    REQUIRE(body0.kind == Stmt::Kind::Block);
    REQUIRE(body0.stmts.size() == 3);
    CHECK(body0.stmts[0]->kind == Stmt::Kind::VarDecl);
    CHECK(body0.stmts[0]->name == "snapshot");
    CHECK(body0.stmts[1]->kind == Stmt::Kind::Foreach);
    CHECK(body0.stmts[2]->kind == Stmt::Kind::Stop);

    const Stmt& loop = *body0.stmts[1];
    CHECK(loop.name == "i");
    REQUIRE(loop.cond->kind == Expr::Kind::Call);
    CHECK(loop.cond->name == "def");
    CHECK(loop.body->kind == Stmt::Kind::Visit);

    // second clause: if (mod.kind == ModifierKind.ANNOTATION) o[input.id] << 1;
    const Stmt& body1 = *clauses[1].body;
    REQUIRE(body1.kind == Stmt::Kind::Block);
    REQUIRE(body1.stmts.size() == 1);
    const Stmt& iff = *body1.stmts[0];
    REQUIRE(iff.kind == Stmt::Kind::If);
    REQUIRE(iff.cond->kind == Expr::Kind::Binary);
    CHECK(iff.cond->name == "==");
    const Stmt& emit = *iff.then_branch;
    REQUIRE(emit.kind == Stmt::Kind::Emit);
    CHECK(emit.output == "o");
    REQUIRE(emit.indices.size() == 1);
    CHECK(emit.indices[0]->kind == Expr::Kind::Member);
    CHECK(emit.value->kind == Expr::Kind::IntLit);
    CHECK(emit.value->int_val == 1);
}

TEST_CASE("missing type after 'of' errors at the semicolon") {
    Pos pos = error_pos("o: output sum of;");
    CHECK(pos.line == 1);
    CHECK(pos.col == 17);
}

TEST_CASE("duplicate output names report both positions") {
    try {
        parse_query_text("o: output sum of int;\no: output mean of float;\n");
        FAIL("expected CompileError");
    } catch (const CompileError& e) {
        const std::string& msg = e.diagnostics()[0].message;
        CHECK(msg.find("duplicate") != std::string::npos);
        CHECK(msg.find("1:1") != std::string::npos); // first declaration site
        CHECK(e.diagnostics()[0].pos.line == 2);
    }
}

TEST_CASE("output declaration forms") {
    Program p = parse_query_text("plain: output sum of int;\n"
                                 "avg: output mean of float;\n"
                                 "all: output collection[k: string][j: int] of string;\n"
                                 "uniq: output set of time;\n"
                                 "best: output top(3) of string weight float;\n");
    REQUIRE(p.outputs.size() == 5);
    CHECK(p.outputs[1].agg == AggKind::MEAN);
    CHECK(p.outputs[2].indices.size() == 2);
    CHECK(p.outputs[3].value_type == Type::time_());
    CHECK(p.outputs[4].agg == AggKind::TOP);
    CHECK(p.outputs[4].top_n == 3);
    REQUIRE(p.outputs[4].weight_type.has_value());
    CHECK(*p.outputs[4].weight_type == Type::float_());
}

TEST_CASE("statement forms parse") {
    Program p = parse_query_text("o: output sum of int;\n"
                                 "x := 1 + 2 * 3;\n"
                                 "y: float = 0.5;\n"
                                 "z: array of int;\n"
                                 "if (x > 3) o << x; else { o << 0; }\n"
                                 "foreach (i: int; i < 10) o << i;\n"
                                 "o << len(getsnapshot(input.repository));\n");
    REQUIRE(p.statements.size() == 6);
    CHECK(p.statements[0]->kind == Stmt::Kind::VarDecl);
    CHECK(p.statements[1]->declared_type.has_value());
    CHECK(p.statements[2]->declared_type->kind == Type::Kind::Array);
    CHECK(p.statements[3]->kind == Stmt::Kind::If);
    CHECK(p.statements[4]->kind == Stmt::Kind::Foreach);
    CHECK(p.statements[5]->kind == Stmt::Kind::Emit);
}

TEST_CASE("precedence nests as documented") {
    Program p = parse_query_text("x := 1 + 2 * 3 == 7 || false && true;");
    // ((1 + (2 * 3)) == 7) || (false && true)
    CHECK(to_source(*p.statements[0]->init) ==
          "(((1 + (2 * 3)) == 7) || (false && true))");
}

TEST_CASE("unary operators bind tighter than binary") {
    Program p = parse_query_text("x := -1 - -2;\ny := !true == false;");
    CHECK(to_source(*p.statements[0]->init) == "((-1) - (-2))");
    CHECK(to_source(*p.statements[1]->init) == "((!true) == false)");
}

TEST_CASE("postfix chains") {
    Program p = parse_query_text("x := input.repository.revisions[0].files[1].path;");
    CHECK(to_source(*p.statements[0]->init) ==
          "input.repository.revisions[0].files[1].path");
}

TEST_CASE("emit with weight and multiple indices") {
    Program p = parse_query_text("t: output top(2)[a: string][b: int] of string weight int;\n"
                                 "t[\"k\"][1] << \"v\" weight 9;\n");
    const Stmt& s = *p.statements[0];
    REQUIRE(s.kind == Stmt::Kind::Emit);
    CHECK(s.indices.size() == 2);
    REQUIRE(s.weight);
    CHECK(s.weight->int_val == 9);
}

TEST_CASE("index expression statement is not an emission") {
    Program p = parse_query_text("x := getsnapshot(input.repository);\nlen(x);\n");
    CHECK(p.statements[1]->kind == Stmt::Kind::ExprStmt);
}

TEST_CASE("visitor wildcard clause") {
    Program p = parse_query_text("visit(input, visitor { before _ -> stop; after n: Revision -> {} });");
    const auto& clauses = p.statements[0]->visitor_expr->clauses;
    REQUIRE(clauses.size() == 2);
    CHECK(!clauses[0].binder.has_value());
    CHECK(!clauses[0].node_type.has_value());
    CHECK(clauses[0].before);
    CHECK(!clauses[1].before);
    CHECK(clauses[1].node_type == "Revision");
}

TEST_CASE("canonical malformed inputs fail at the expected positions") {
    CHECK(error_pos("o: output sum of;").col == 17);
    CHECK(error_pos("o: output bogus of int;").col == 11);
    CHECK(error_pos("o: output top() of int weight int;").col == 15);
    CHECK(error_pos("x := ;").col == 6);
    CHECK(error_pos("if (true) stop").col == 15);               // missing ';'
    CHECK(error_pos("foreach (i int; true) stop;").col == 12);  // missing ':'
    CHECK(error_pos("visit();").col == 7);
    CHECK(error_pos("visitor { when x: Y -> stop; };").col == 11); // 'when' is not a clause
    CHECK(error_pos("o: output sum of int;\no[1 << 2;").col == 5);  // '<<' inside an index
    CHECK(error_pos("x := (1 + 2;").col == 12);
}

TEST_CASE("pretty-printed programs re-parse to the same structure") {
    const char* samples[] = {
        minertest::kAnnotationQuery,
        "o: output sum of int;\nif (1 < 2) o << 1;\n",
        "m: output mean[k: string] of float;\nm[\"a\"] << 1.5;\n",
        "c: output collection of string;\nforeach (i: int; i < 3) c << \"s\" + \"t\";\n",
        "visit(input, visitor { before _ -> stop; });",
    };
    for (const char* text : samples) {
        Program once = parse_query_text(text);
        std::string printed = to_source(once);
        Program twice = parse_query_text(printed);
        CHECK(to_source(twice) == printed);
    }
}
