#include "miner/query/printer.hpp"

#include <charconv>

namespace miner::query {

namespace {

std::string escape_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string float_text(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, p);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
        s += ".0";
    return s;
}

class Printer {
public:
    std::string run(const Program& prog) {
        for (const auto& o : prog.outputs) print_output(o);
        if (!prog.outputs.empty() && !prog.statements.empty()) out_ += '\n';
        for (const auto& s : prog.statements) print_stmt(*s);
        return std::move(out_);
    }

    static std::string expr_text(const Expr& e) {
        Printer p;
        p.print_expr(e);
        return std::move(p.out_);
    }

private:
    void emit(std::string_view s) { out_ += s; }
    void line_start() { out_.append(static_cast<std::size_t>(indent_) * 4, ' '); }

    void print_output(const OutputDecl& o) {
        emit(o.name);
        emit(": output ");
        switch (o.agg) {
        case AggKind::SUM: emit("sum"); break;
        case AggKind::MEAN: emit("mean"); break;
        case AggKind::COLLECTION: emit("collection"); break;
        case AggKind::SET: emit("set"); break;
        case AggKind::TOP:
            emit("top(");
            emit(std::to_string(o.top_n));
            emit(")");
            break;
        }
        for (const auto& [label, type] : o.indices) {
            emit("[");
            emit(label);
            emit(": ");
            emit(to_source(type));
            emit("]");
        }
        emit(" of ");
        emit(to_source(o.value_type));
        if (o.weight_type) {
            emit(" weight ");
            emit(to_source(*o.weight_type));
        }
        emit(";\n");
    }

    void print_stmt(const Stmt& s) {
        line_start();
        print_stmt_inline(s);
    }

    void print_stmt_inline(const Stmt& s) {
        switch (s.kind) {
        case Stmt::Kind::VarDecl:
            emit(s.name);
            if (s.declared_type) {
                emit(": ");
                emit(to_source(*s.declared_type));
                if (s.init) {
                    emit(" = ");
                    print_expr(*s.init);
                }
            } else {
                emit(" := ");
                print_expr(*s.init);
            }
            emit(";\n");
            break;
        case Stmt::Kind::If:
            emit("if (");
            print_expr(*s.cond);
            emit(")\n");
            print_nested(*s.then_branch);
            if (s.else_branch) {
                line_start();
                emit("else\n");
                print_nested(*s.else_branch);
            }
            break;
        case Stmt::Kind::Foreach:
            emit("foreach (");
            emit(s.name);
            emit(": ");
            emit(to_source(*s.declared_type));
            emit("; ");
            print_expr(*s.cond);
            emit(")\n");
            print_nested(*s.body);
            break;
        case Stmt::Kind::Stop:
            emit("stop;\n");
            break;
        case Stmt::Kind::Emit:
            emit(s.output);
            for (const auto& ix : s.indices) {
                emit("[");
                print_expr(*ix);
                emit("]");
            }
            emit(" << ");
            print_expr(*s.value);
            if (s.weight) {
                emit(" weight ");
                print_expr(*s.weight);
            }
            emit(";\n");
            break;
        case Stmt::Kind::Visit:
            emit("visit(");
            print_expr(*s.target);
            if (s.visitor_expr) {
                emit(", ");
                print_expr(*s.visitor_expr);
            }
            emit(");\n");
            break;
        case Stmt::Kind::ExprStmt:
            print_expr(*s.expr);
            emit(";\n");
            break;
        case Stmt::Kind::Block:
            emit("{\n");
            ++indent_;
            for (const auto& c : s.stmts) print_stmt(*c);
            --indent_;
            line_start();
            emit("}\n");
            break;
        }
    }

    void print_nested(const Stmt& s) {
        ++indent_;
        print_stmt(s);
        --indent_;
    }

    void print_expr(const Expr& e) {
        switch (e.kind) {
        case Expr::Kind::IntLit: emit(std::to_string(e.int_val)); break;
        case Expr::Kind::FloatLit: emit(float_text(e.float_val)); break;
        case Expr::Kind::StringLit: emit(escape_string(e.str_val)); break;
        case Expr::Kind::BoolLit: emit(e.bool_val ? "true" : "false"); break;
        case Expr::Kind::Ident: emit(e.name); break;
        case Expr::Kind::Member:
            print_expr(*e.lhs);
            emit(".");
            emit(e.name);
            break;
        case Expr::Kind::EnumMember:
            emit(e.enum_name);
            emit(".");
            emit(e.name);
            break;
        case Expr::Kind::Index:
            print_expr(*e.lhs);
            emit("[");
            print_expr(*e.rhs);
            emit("]");
            break;
        case Expr::Kind::Call:
            emit(e.name);
            emit("(");
            for (std::size_t i = 0; i < e.args.size(); ++i) {
                if (i) emit(", ");
                print_expr(*e.args[i]);
            }
            emit(")");
            break;
        case Expr::Kind::Unary:
            emit("(");
            emit(e.name);
            print_expr(*e.lhs);
            emit(")");
            break;
        case Expr::Kind::Binary:
            emit("(");
            print_expr(*e.lhs);
            emit(" ");
            emit(e.name);
            emit(" ");
            print_expr(*e.rhs);
            emit(")");
            break;
        case Expr::Kind::VisitorLit:
            emit("visitor {\n");
            ++indent_;
            for (const auto& c : e.clauses) {
                line_start();
                emit(c.before ? "before " : "after ");
                if (c.binder) {
                    emit(*c.binder);
                    emit(": ");
                    emit(*c.node_type);
                } else {
                    emit("_");
                }
                emit(" ->\n");
                print_nested(*c.body);
            }
            --indent_;
            line_start();
            emit("}");
            break;
        }
    }

    std::string out_;
    int indent_ = 0;
};

} // namespace

std::string to_source(const Type& t) {
    switch (t.kind) {
    case Type::Kind::Int: return "int";
    case Type::Kind::Float: return "float";
    case Type::Kind::String: return "string";
    case Type::Kind::Bool: return "bool";
    case Type::Kind::Time: return "time";
    case Type::Kind::Array: return "array of " + to_source(*t.elem);
    case Type::Kind::Node: return t.name;
    case Type::Kind::Enum: return t.name;
    case Type::Kind::Visitor: return "visitor";
    case Type::Kind::Invalid: return "<invalid>";
    }
    return "<invalid>";
}

std::string to_string(const Type& t) { return to_source(t); }

std::string to_source(const Program& program) {
    Printer p;
    return p.run(program);
}

std::string to_source(const Expr& expr) { return Printer::expr_text(expr); }

const char* to_string(AggKind k) {
    switch (k) {
    case AggKind::SUM: return "sum";
    case AggKind::MEAN: return "mean";
    case AggKind::COLLECTION: return "collection";
    case AggKind::SET: return "set";
    case AggKind::TOP: return "top";
    }
    return "?";
}

} // namespace miner::query
