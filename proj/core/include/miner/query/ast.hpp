#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "miner/query/token.hpp"
#include "miner/query/types.hpp"

namespace miner::query {

struct Expr;
struct Stmt;
using ExprPtr = std::unique_ptr<Expr>;
using StmtPtr = std::unique_ptr<Stmt>;

enum class AggKind { SUM, MEAN, COLLECTION, SET, TOP };

const char* to_string(AggKind k);

struct VisitorClause {
    bool before = true;
    std::optional<std::string> binder;    // absent for "_" clauses
    std::optional<std::string> node_type; // absent = wildcard
    StmtPtr body;
    Pos pos;
};

struct Expr {
    enum class Kind {
        IntLit,
        FloatLit,
        StringLit,
        BoolLit,
        Ident,
        Member,     // lhs . name
        EnumMember, // enum_name . name (resolved from Member by the typechecker)
        Index,      // lhs [ rhs ]
        Call,       // name ( args )
        Unary,      // op lhs
        Binary,     // lhs op rhs
        VisitorLit,
    };

    Kind kind;
    Pos pos;

    std::int64_t int_val = 0; // IntLit; EnumMember: member ordinal
    double float_val = 0.0;
    bool bool_val = false;
    std::string str_val;

    std::string name; // Ident / Member field / Call callee / EnumMember member / op text
    std::string enum_name;
    ExprPtr lhs;
    ExprPtr rhs;
    std::vector<ExprPtr> args;
    std::vector<VisitorClause> clauses;

    Type type; // filled by the typechecker
};

struct Stmt {
    enum class Kind { VarDecl, If, Foreach, Stop, Emit, Visit, ExprStmt, Block };

    Kind kind;
    Pos pos;

    // VarDecl / Foreach loop variable
    std::string name;
    std::optional<Type> declared_type;
    ExprPtr init;
    Type var_type; // resolved

    // If / Foreach condition
    ExprPtr cond;
    StmtPtr then_branch;
    StmtPtr else_branch;
    StmtPtr body;

    // Emit
    std::string output;
    std::vector<ExprPtr> indices;
    ExprPtr value;
    ExprPtr weight;
    int output_index = -1; // resolved

    // Visit
    ExprPtr target;
    ExprPtr visitor_expr; // may be null (current visitor)

    // ExprStmt
    ExprPtr expr;

    // Block
    std::vector<StmtPtr> stmts;
};

struct OutputDecl {
    std::string name;
    Pos pos;
    AggKind agg = AggKind::SUM;
    std::int64_t top_n = 0; // TOP only
    std::vector<std::pair<std::string, Type>> indices;
    Type value_type;
    std::optional<Type> weight_type; // TOP only
};

struct Program {
    std::vector<OutputDecl> outputs;
    std::vector<StmtPtr> statements;
};

} // namespace miner::query
