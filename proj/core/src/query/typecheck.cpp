#include "miner/query/typecheck.hpp"

#include <unordered_map>

#include "miner/query/diagnostics.hpp"
#include "miner/query/printer.hpp"

namespace miner::query {

namespace {

class Checker {
public:
    explicit Checker(const engine::BuiltinRegistry& builtins) : builtins_(builtins) {}

    void run(Program& prog) {
        scopes_.emplace_back();
        scopes_.back()["input"] = Type::node("Project");

        for (auto& o : prog.outputs) check_output_decl(o);
        outputs_ = &prog.outputs;
        for (auto& s : prog.statements) check_stmt(*s);

        if (!diags_.empty()) throw CompileError(std::move(diags_));
    }

private:
    using Scope = std::unordered_map<std::string, Type>;

    void error(Pos pos, std::string msg) { diags_.push_back({pos, std::move(msg)}); }

    const Type* lookup(const std::string& name) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto found = it->find(name);
            if (found != it->end()) return &found->second;
        }
        return nullptr;
    }

    void check_output_decl(const OutputDecl& o) {
        if ((o.agg == AggKind::SUM || o.agg == AggKind::MEAN) && !o.value_type.is_numeric())
            error(o.pos, "output '" + o.name + "': " + to_string(o.agg) +
                             " aggregators take int or float values, not " +
                             to_string(o.value_type));
        if (o.agg == AggKind::TOP) {
            if (!o.weight_type)
                error(o.pos, "output '" + o.name + "': top aggregators require a weight type");
            else if (!o.weight_type->is_numeric())
                error(o.pos, "output '" + o.name + "': weight type must be int or float, not " +
                                 to_string(*o.weight_type));
        } else if (o.weight_type) {
            error(o.pos, "output '" + o.name + "': only top aggregators take a weight");
        }
    }

    void check_stmt(Stmt& s) {
        switch (s.kind) {
        case Stmt::Kind::VarDecl: check_var_decl(s); break;
        case Stmt::Kind::If: {
            Type c = check_expr(*s.cond);
            if (c.valid() && c.kind != Type::Kind::Bool)
                error(s.cond->pos, "if condition must be bool, got " + to_string(c));
            check_stmt(*s.then_branch);
            if (s.else_branch) check_stmt(*s.else_branch);
            break;
        }
        case Stmt::Kind::Foreach: {
            if (!s.declared_type || !(*s.declared_type == Type::int_()))
                error(s.pos, "foreach loop variable must have type int");
            s.var_type = Type::int_();
            scopes_.emplace_back();
            declare(s.pos, s.name, s.var_type);
            Type c = check_expr(*s.cond);
            if (c.valid() && c.kind != Type::Kind::Bool)
                error(s.cond->pos, "foreach condition must be bool, got " + to_string(c));
            check_stmt(*s.body);
            scopes_.pop_back();
            break;
        }
        case Stmt::Kind::Stop:
            if (clause_context_ != ClauseContext::Before)
                error(s.pos, "'stop' is only permitted inside a before clause body");
            break;
        case Stmt::Kind::Emit: check_emit(s); break;
        case Stmt::Kind::Visit: check_visit(s); break;
        case Stmt::Kind::ExprStmt: check_expr(*s.expr); break;
        case Stmt::Kind::Block:
            scopes_.emplace_back();
            for (auto& c : s.stmts) check_stmt(*c);
            scopes_.pop_back();
            break;
        }
    }

    void declare(Pos pos, const std::string& name, Type type) {
        if (name == "input") {
            error(pos, "'input' is bound by the runtime and cannot be declared");
            return;
        }
        auto [it, inserted] = scopes_.back().emplace(name, std::move(type));
        if (!inserted) error(pos, "redeclaration of '" + name + "' in the same scope");
    }

    void check_var_decl(Stmt& s) {
        Type declared;
        if (s.declared_type) {
            declared = resolve_type(s.pos, *s.declared_type);
            if (s.init) {
                Type init = check_expr(*s.init);
                if (init.valid() && declared.valid() && !(init == declared))
                    error(s.init->pos, "cannot initialize " + to_string(declared) + " variable '" +
                                           s.name + "' with " + to_string(init));
            } else if (declared.valid() && !declared.is_scalar() &&
                       declared.kind != Type::Kind::Array) {
                error(s.pos, "variable '" + s.name + "' of type " + to_string(declared) +
                                 " requires an initializer");
            }
        } else {
            declared = check_expr(*s.init); // inferred
        }
        s.var_type = declared;
        declare(s.pos, s.name, declared);
    }

    Type resolve_type(Pos pos, const Type& t) {
        if (t.kind == Type::Kind::Node) {
            if (!is_schema_node_type(t.name)) {
                if (schema_enums().count(t.name)) return Type::enum_(t.name);
                error(pos, "unknown type '" + t.name + "'");
                return Type::invalid();
            }
            return t;
        }
        if (t.kind == Type::Kind::Array) {
            Type elem = resolve_type(pos, *t.elem);
            if (!elem.valid()) return Type::invalid();
            return Type::array(std::move(elem));
        }
        return t;
    }

    void check_emit(Stmt& s) {
        const OutputDecl* decl = nullptr;
        for (std::size_t i = 0; i < outputs_->size(); ++i)
            if ((*outputs_)[i].name == s.output) {
                decl = &(*outputs_)[i];
                s.output_index = static_cast<int>(i);
                break;
            }
        if (!decl) {
            error(s.pos, "unknown output '" + s.output + "'");
            for (auto& ix : s.indices) check_expr(*ix);
            check_expr(*s.value);
            if (s.weight) check_expr(*s.weight);
            return;
        }
        if (s.indices.size() != decl->indices.size())
            error(s.pos, "output '" + s.output + "' has " + std::to_string(decl->indices.size()) +
                             " indices, emission supplies " + std::to_string(s.indices.size()));
        for (std::size_t i = 0; i < s.indices.size(); ++i) {
            Type t = check_expr(*s.indices[i]);
            if (i < decl->indices.size() && t.valid() && !(t == decl->indices[i].second))
                error(s.indices[i]->pos, "index '" + decl->indices[i].first + "' of output '" +
                                             s.output + "' expects " +
                                             to_string(decl->indices[i].second) + ", got " +
                                             to_string(t));
        }
        Type v = check_expr(*s.value);
        if (v.valid() && !(v == decl->value_type))
            error(s.value->pos, "output '" + s.output + "' takes values of type " +
                                    to_string(decl->value_type) + ", got " + to_string(v));
        if (decl->weight_type) {
            if (!s.weight) {
                error(s.pos, "output '" + s.output + "' requires a weight");
            } else {
                Type w = check_expr(*s.weight);
                if (w.valid() && !(w == *decl->weight_type))
                    error(s.weight->pos, "weight of output '" + s.output + "' must be " +
                                             to_string(*decl->weight_type) + ", got " +
                                             to_string(w));
            }
        } else if (s.weight) {
            error(s.weight->pos, "output '" + s.output + "' does not take a weight");
        }
    }

    void check_visit(Stmt& s) {
        Type target = check_expr(*s.target);
        if (target.valid() && target.kind != Type::Kind::Node)
            error(s.target->pos, "visit requires a schema node, got " + to_string(target));
        if (s.visitor_expr) {
            Type v = check_expr(*s.visitor_expr);
            if (v.valid() && v.kind != Type::Kind::Visitor)
                error(s.visitor_expr->pos, "second argument of visit must be a visitor, got " +
                                               to_string(v));
        }
    }

    Type check_expr(Expr& e) {
        Type t = compute_type(e);
        e.type = t;
        return t;
    }

    Type compute_type(Expr& e) {
        switch (e.kind) {
        case Expr::Kind::IntLit: return Type::int_();
        case Expr::Kind::FloatLit: return Type::float_();
        case Expr::Kind::StringLit: return Type::string_();
        case Expr::Kind::BoolLit: return Type::bool_();
        case Expr::Kind::Ident: {
            if (const Type* t = lookup(e.name)) return *t;
            error(e.pos, "unknown identifier '" + e.name + "'");
            return Type::invalid();
        }
        case Expr::Kind::Member: return check_member(e);
        case Expr::Kind::EnumMember: return Type::enum_(e.enum_name);
        case Expr::Kind::Index: {
            Type base = check_expr(*e.lhs);
            Type ix = check_expr(*e.rhs);
            if (ix.valid() && ix.kind != Type::Kind::Int)
                error(e.rhs->pos, "array index must be int, got " + to_string(ix));
            if (!base.valid()) return Type::invalid();
            if (base.kind != Type::Kind::Array) {
                error(e.pos, "index access requires an array, got " + to_string(base));
                return Type::invalid();
            }
            return *base.elem;
        }
        case Expr::Kind::Call: return check_call(e);
        case Expr::Kind::Unary: {
            Type t = check_expr(*e.lhs);
            if (!t.valid()) return Type::invalid();
            if (e.name == "!") {
                if (t.kind != Type::Kind::Bool) {
                    error(e.pos, "operator ! requires bool, got " + to_string(t));
                    return Type::invalid();
                }
                return Type::bool_();
            }
            if (!t.is_numeric()) {
                error(e.pos, "unary - requires int or float, got " + to_string(t));
                return Type::invalid();
            }
            return t;
        }
        case Expr::Kind::Binary: return check_binary(e);
        case Expr::Kind::VisitorLit: return check_visitor_literal(e);
        }
        return Type::invalid();
    }

    Type check_member(Expr& e) {
        // EnumType.MEMBER, unless a variable shadows the enum type name.
        if (e.lhs->kind == Expr::Kind::Ident && !lookup(e.lhs->name) &&
            schema_enums().count(e.lhs->name)) {
            const std::string enum_name = e.lhs->name;
            const int ordinal = schema_enum_member_index(enum_name, e.name);
            if (ordinal < 0) {
                std::string valid;
                for (const auto& m : schema_enums().at(enum_name)) {
                    if (!valid.empty()) valid += ", ";
                    valid += m;
                }
                error(e.pos, "unknown member '" + e.name + "' of " + enum_name +
                                 " (valid members: " + valid + ")");
                return Type::invalid();
            }
            e.kind = Expr::Kind::EnumMember;
            e.enum_name = enum_name;
            e.int_val = ordinal;
            e.lhs.reset();
            return Type::enum_(enum_name);
        }

        Type base = check_expr(*e.lhs);
        if (!base.valid()) return Type::invalid();
        if (base.kind != Type::Kind::Node) {
            error(e.pos, "cannot access field '" + e.name + "' of " + to_string(base));
            return Type::invalid();
        }
        const auto& fields = schema_node_fields().at(base.name);
        for (const auto& [fname, ftype] : fields)
            if (fname == e.name) return ftype;
        error(e.pos, "type " + base.name + " has no field '" + e.name + "'");
        return Type::invalid();
    }

    Type check_call(Expr& e) {
        const engine::Builtin* b = builtins_.find(e.name);
        if (!b) {
            error(e.pos, "unknown function '" + e.name + "'");
            for (auto& a : e.args) check_expr(*a);
            return Type::invalid();
        }
        const auto& sig = b->signature;
        if (e.args.size() < sig.min_args || e.args.size() > sig.params.size()) {
            error(e.pos, "function '" + e.name + "' takes " + std::to_string(sig.min_args) +
                             (sig.min_args == sig.params.size()
                                  ? ""
                                  : " to " + std::to_string(sig.params.size())) +
                             " arguments, got " + std::to_string(e.args.size()));
            for (auto& a : e.args) check_expr(*a);
            return sig.result;
        }
        for (std::size_t i = 0; i < e.args.size(); ++i) {
            Type t = check_expr(*e.args[i]);
            if (!t.valid()) continue;
            const engine::ParamSpec& p = sig.params[i];
            switch (p.match) {
            case engine::ParamSpec::Match::Exact:
                if (!(t == p.type))
                    error(e.args[i]->pos, "argument " + std::to_string(i + 1) + " of '" + e.name +
                                              "' expects " + to_string(p.type) + ", got " +
                                              to_string(t));
                break;
            case engine::ParamSpec::Match::AnyArray:
                if (t.kind != Type::Kind::Array)
                    error(e.args[i]->pos, "argument " + std::to_string(i + 1) + " of '" + e.name +
                                              "' expects an array, got " + to_string(t));
                break;
            case engine::ParamSpec::Match::TimeLike:
                if (t.kind != Type::Kind::Time && t.kind != Type::Kind::Int)
                    error(e.args[i]->pos, "argument " + std::to_string(i + 1) + " of '" + e.name +
                                              "' expects time (or int microseconds), got " +
                                              to_string(t));
                break;
            case engine::ParamSpec::Match::Any: break;
            }
        }
        return sig.result;
    }

    Type check_binary(Expr& e) {
        Type l = check_expr(*e.lhs);
        Type r = check_expr(*e.rhs);
        if (!l.valid() || !r.valid()) return Type::invalid();
        const std::string& op = e.name;

        auto mismatch = [&] {
            error(e.pos, "operator " + op + " cannot combine " + to_string(l) + " and " +
                             to_string(r));
            return Type::invalid();
        };

        if (op == "||" || op == "&&") {
            if (l.kind != Type::Kind::Bool || r.kind != Type::Kind::Bool) return mismatch();
            return Type::bool_();
        }
        if (op == "==" || op == "!=") {
            if (!(l == r)) return mismatch();
            if (!l.is_scalar() && l.kind != Type::Kind::Enum) return mismatch();
            return Type::bool_();
        }
        if (op == "<" || op == "<=" || op == ">" || op == ">=") {
            if (!(l == r)) return mismatch();
            if (l.kind != Type::Kind::Int && l.kind != Type::Kind::Float &&
                l.kind != Type::Kind::String && l.kind != Type::Kind::Time)
                return mismatch();
            return Type::bool_();
        }
        if (op == "+") {
            if (!(l == r)) return mismatch();
            if (l.kind != Type::Kind::Int && l.kind != Type::Kind::Float &&
                l.kind != Type::Kind::String)
                return mismatch();
            return l;
        }
        // - * /
        if (!(l == r) || !l.is_numeric()) return mismatch();
        return l;
    }

    Type check_visitor_literal(Expr& e) {
        std::vector<std::pair<bool, std::string>> seen; // (before, type or "" wildcard)
        for (auto& clause : e.clauses) {
            std::string key = clause.node_type.value_or("");
            for (const auto& [b, t] : seen)
                if (b == clause.before && t == key)
                    error(clause.pos,
                          std::string("duplicate ") + (clause.before ? "before" : "after") +
                              " clause for " + (key.empty() ? "wildcard" : key));
            seen.emplace_back(clause.before, key);

            if (clause.node_type && !is_schema_node_type(*clause.node_type))
                error(clause.pos, "unknown node type '" + *clause.node_type + "'");

            // Clause bodies close over the top-level scope only.
            std::vector<Scope> saved = std::move(scopes_);
            scopes_.clear();
            scopes_.push_back(saved.front());
            scopes_.emplace_back();
            if (clause.binder && clause.node_type && is_schema_node_type(*clause.node_type))
                declare(clause.pos, *clause.binder, Type::node(*clause.node_type));

            ClauseContext outer = clause_context_;
            clause_context_ = clause.before ? ClauseContext::Before : ClauseContext::After;
            check_stmt(*clause.body);
            clause_context_ = outer;

            scopes_ = std::move(saved);
        }
        return Type::visitor();
    }

    enum class ClauseContext { None, Before, After };

    const engine::BuiltinRegistry& builtins_;
    std::vector<Scope> scopes_;
    std::vector<Diagnostic> diags_;
    const std::vector<OutputDecl>* outputs_ = nullptr;
    ClauseContext clause_context_ = ClauseContext::None;
};

} // namespace

TypedProgram typecheck(Program program, const engine::BuiltinRegistry& builtins) {
    Checker checker(builtins);
    checker.run(program);
    return TypedProgram{std::move(program)};
}

} // namespace miner::query
