#include "miner/engine/interpreter.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <unordered_map>

namespace miner::engine {

using query::Expr;
using query::Stmt;
using query::Type;

namespace {

// Maps a schema node reference to its query-side type name.
struct NodeTypeName {
    const char* operator()(const Project*) const { return "Project"; }
    const char* operator()(const CodeRepository*) const { return "CodeRepository"; }
    const char* operator()(const Revision*) const { return "Revision"; }
    const char* operator()(const ChangedFile*) const { return "ChangedFile"; }
    const char* operator()(const AstRoot*) const { return "ASTRoot"; }
    const char* operator()(const Namespace*) const { return "Namespace"; }
    const char* operator()(const Declaration*) const { return "Declaration"; }
    const char* operator()(const Method*) const { return "Method"; }
    const char* operator()(const Variable*) const { return "Variable"; }
    const char* operator()(const Statement*) const { return "Statement"; }
    const char* operator()(const Expression*) const { return "Expression"; }
    const char* operator()(const Modifier*) const { return "Modifier"; }
};

const char* node_type_name(const NodeRef& n) { return std::visit(NodeTypeName{}, n); }

template <typename T>
Value::Array node_array(const std::vector<T>& items) {
    auto arr = std::make_shared<std::vector<Value>>();
    arr->reserve(items.size());
    for (const T& item : items) arr->push_back(Value(NodeRef(&item)));
    return arr;
}

Value::Array string_array(const std::vector<std::string>& items) {
    auto arr = std::make_shared<std::vector<Value>>();
    arr->reserve(items.size());
    for (const auto& s : items) arr->push_back(Value(s));
    return arr;
}

class Evaluator {
public:
    Evaluator(const query::TypedProgram& prog, const Project& project,
              const DatasetReader* dataset, const BuiltinRegistry& builtins,
              AggregatorState& scratch)
        : prog_(prog), project_(project), dataset_(dataset), builtins_(builtins),
          scratch_(scratch) {
        ctx_.project = &project_;
        ctx_.dataset = dataset_;
    }

    void run() {
        scopes_.clear();
        scopes_.emplace_back();
        scopes_.back()["input"] = Value(NodeRef(&project_));
        for (const auto& s : prog_.program.statements) {
            if (exec(*s) == Flow::Stopped) break; // cannot happen: typechecked
        }
    }

private:
    enum class Flow { Normal, Stopped };
    using Scope = std::unordered_map<std::string, Value>;

    [[noreturn]] void fail(query::Pos pos, std::string msg) const {
        throw EvalError(pos, std::move(msg));
    }

    Value* find_var(const std::string& name) {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto found = it->find(name);
            if (found != it->end()) return &found->second;
        }
        return nullptr;
    }

    Value zero_value(const Type& t) const {
        switch (t.kind) {
        case Type::Kind::Int:
        case Type::Kind::Time: return Value(std::int64_t{0});
        case Type::Kind::Float: return Value(0.0);
        case Type::Kind::Bool: return Value(false);
        case Type::Kind::String: return Value(std::string{});
        case Type::Kind::Array: return Value(std::make_shared<const std::vector<Value>>());
        default: return Value();
        }
    }

    Flow exec(const Stmt& s) {
        switch (s.kind) {
        case Stmt::Kind::VarDecl:
            scopes_.back()[s.name] = s.init ? eval(*s.init) : zero_value(s.var_type);
            return Flow::Normal;
        case Stmt::Kind::If:
            if (eval(*s.cond).as_bool()) return exec(*s.then_branch);
            if (s.else_branch) return exec(*s.else_branch);
            return Flow::Normal;
        case Stmt::Kind::Foreach: {
            scopes_.emplace_back();
            scopes_.back()[s.name] = Value(std::int64_t{0});
            Flow flow = Flow::Normal;
            while (eval(*s.cond).as_bool()) {
                flow = exec(*s.body);
                if (flow == Flow::Stopped) break;
                Value& var = scopes_.back()[s.name];
                var = Value(var.as_int() + 1);
            }
            scopes_.pop_back();
            return flow;
        }
        case Stmt::Kind::Stop:
            return Flow::Stopped;
        case Stmt::Kind::Emit:
            exec_emit(s);
            return Flow::Normal;
        case Stmt::Kind::Visit: {
            Value target = eval(*s.target);
            const Expr* visitor = s.visitor_expr ? resolve_visitor(*s.visitor_expr) : current_visitor_;
            if (!visitor) fail(s.pos, "visit without a visitor outside any traversal");
            dispatch(target.as_node(), visitor);
            return Flow::Normal;
        }
        case Stmt::Kind::ExprStmt:
            eval(*s.expr);
            return Flow::Normal;
        case Stmt::Kind::Block: {
            scopes_.emplace_back();
            Flow flow = Flow::Normal;
            for (const auto& c : s.stmts) {
                flow = exec(*c);
                if (flow == Flow::Stopped) break;
            }
            scopes_.pop_back();
            return flow;
        }
        }
        return Flow::Normal;
    }

    const Expr* resolve_visitor(const Expr& e) {
        Value v = eval(e);
        return v.as_visitor();
    }

    void exec_emit(const Stmt& s) {
        const auto& decl = prog_.program.outputs[static_cast<std::size_t>(s.output_index)];
        AggregatorState::Key key;
        key.reserve(s.indices.size());
        for (std::size_t i = 0; i < s.indices.size(); ++i) {
            Value v = eval(*s.indices[i]);
            std::string part = render_scalar(v);
            if (decl.indices[i].second.kind == Type::Kind::String &&
                (part.find(']') != std::string::npos || part.find('\n') != std::string::npos))
                fail(s.indices[i]->pos,
                     "index value for output '" + s.output + "' contains ']' or newline");
            key.push_back(std::move(part));
        }
        Value value = eval(*s.value);
        std::optional<Value> weight;
        if (s.weight) weight = eval(*s.weight);
        try {
            scratch_.update(static_cast<std::size_t>(s.output_index), std::move(key), value,
                            weight ? &*weight : nullptr);
        } catch (const AggregatorOverflow& e) {
            fail(s.pos, e.what());
        }
    }

    Value eval(const Expr& e) {
        switch (e.kind) {
        case Expr::Kind::IntLit: return Value(e.int_val);
        case Expr::Kind::FloatLit: return Value(e.float_val);
        case Expr::Kind::StringLit: return Value(e.str_val);
        case Expr::Kind::BoolLit: return Value(e.bool_val);
        case Expr::Kind::Ident: {
            Value* v = find_var(e.name);
            if (!v) fail(e.pos, "unbound identifier '" + e.name + "'");
            return *v;
        }
        case Expr::Kind::EnumMember:
            return Value(EnumValue{static_cast<std::int32_t>(e.int_val)});
        case Expr::Kind::Member: return eval_member(e);
        case Expr::Kind::Index: {
            Value base = eval(*e.lhs);
            Value ix = eval(*e.rhs);
            const auto& arr = *base.as_array();
            const std::int64_t i = ix.as_int();
            if (i < 0 || static_cast<std::size_t>(i) >= arr.size())
                fail(e.pos, "array index " + std::to_string(i) + " out of bounds (size " +
                                std::to_string(arr.size()) + ")");
            return arr[static_cast<std::size_t>(i)];
        }
        case Expr::Kind::Call: return eval_call(e);
        case Expr::Kind::Unary: {
            Value v = eval(*e.lhs);
            if (e.name == "!") return Value(!v.as_bool());
            if (std::holds_alternative<double>(v.v)) return Value(-v.as_float());
            if (v.as_int() == std::numeric_limits<std::int64_t>::min())
                fail(e.pos, "integer negation overflows");
            return Value(-v.as_int());
        }
        case Expr::Kind::Binary: return eval_binary(e);
        case Expr::Kind::VisitorLit: return Value(&e);
        }
        fail(e.pos, "unevaluable expression");
    }

    Value eval_member(const Expr& e) {
        Value base = eval(*e.lhs);
        const NodeRef node = base.as_node();
        const std::string& f = e.name;

        if (auto* p = std::get_if<const Project*>(&node)) {
            const Project& x = **p;
            if (f == "id") return Value(x.id);
            if (f == "name") return Value(x.name);
            if (f == "url") return Value(x.url);
            if (f == "stars") return Value(x.stars);
            if (f == "created") return Value(x.created);
            if (f == "repository") return Value(NodeRef(&x.repository));
        } else if (auto* r = std::get_if<const CodeRepository*>(&node)) {
            const CodeRepository& x = **r;
            if (f == "url") return Value(x.url);
            if (f == "head_index") {
                if (!x.head_index) fail(e.pos, "head_index is absent (empty history)");
                return Value(static_cast<std::int64_t>(*x.head_index));
            }
            if (f == "revisions") return Value(node_array(x.revisions));
        } else if (auto* rev = std::get_if<const Revision*>(&node)) {
            const Revision& x = **rev;
            if (f == "id") return Value(x.id);
            if (f == "author") return Value(x.author);
            if (f == "committer") return Value(x.committer);
            if (f == "commit_time") return Value(x.commit_time);
            if (f == "log") return Value(x.log);
            if (f == "files") return Value(node_array(x.files));
        } else if (auto* cf = std::get_if<const ChangedFile*>(&node)) {
            const ChangedFile& x = **cf;
            if (f == "path") return Value(x.path);
            if (f == "change_kind") return Value(EnumValue{static_cast<std::int32_t>(x.change_kind)});
            if (f == "file_kind") return Value(EnumValue{static_cast<std::int32_t>(x.file_kind)});
            if (f == "blob_hash") return Value(x.blob_hash);
            if (f == "parse_error") return Value(x.parse_error);
        } else if (auto* ar = std::get_if<const AstRoot*>(&node)) {
            if (f == "namespace") return Value(NodeRef(&(*ar)->ns));
        } else if (auto* ns = std::get_if<const Namespace*>(&node)) {
            const Namespace& x = **ns;
            if (f == "name") return Value(x.name);
            if (f == "imports") return Value(string_array(x.imports));
            if (f == "declarations") return Value(node_array(x.declarations));
        } else if (auto* d = std::get_if<const Declaration*>(&node)) {
            const Declaration& x = **d;
            if (f == "name") return Value(x.name);
            if (f == "kind") return Value(EnumValue{static_cast<std::int32_t>(x.kind)});
            if (f == "modifiers") return Value(node_array(x.modifiers));
            if (f == "fields") return Value(node_array(x.fields));
            if (f == "methods") return Value(node_array(x.methods));
            if (f == "nested") return Value(node_array(x.nested));
        } else if (auto* m = std::get_if<const Method*>(&node)) {
            const Method& x = **m;
            if (f == "name") return Value(x.name);
            if (f == "modifiers") return Value(node_array(x.modifiers));
            if (f == "return_type_name") return Value(x.return_type_name);
            if (f == "params") return Value(node_array(x.params));
            if (f == "statements") return Value(node_array(x.statements));
        } else if (auto* v = std::get_if<const Variable*>(&node)) {
            const Variable& x = **v;
            if (f == "name") return Value(x.name);
            if (f == "type_name") return Value(x.type_name);
            if (f == "modifiers") return Value(node_array(x.modifiers));
        } else if (auto* st = std::get_if<const Statement*>(&node)) {
            const Statement& x = **st;
            if (f == "kind") return Value(EnumValue{static_cast<std::int32_t>(x.kind)});
            if (f == "statements") return Value(node_array(x.statements));
            if (f == "expressions") return Value(node_array(x.expressions));
        } else if (auto* ex = std::get_if<const Expression*>(&node)) {
            const Expression& x = **ex;
            if (f == "kind") return Value(EnumValue{static_cast<std::int32_t>(x.kind)});
            if (f == "method_name") return Value(x.method_name);
            if (f == "literal") return Value(x.literal);
            if (f == "expressions") return Value(node_array(x.expressions));
        } else if (auto* mod = std::get_if<const Modifier*>(&node)) {
            const Modifier& x = **mod;
            if (f == "kind") return Value(EnumValue{static_cast<std::int32_t>(x.kind)});
            if (f == "visibility") return Value(x.visibility);
            if (f == "annotation_name") return Value(x.annotation_name);
            if (f == "other") return Value(x.other);
        }
        fail(e.pos, std::string(node_type_name(node)) + " has no field '" + f + "'");
    }

    Value eval_call(const Expr& e) {
        const Builtin* b = builtins_.find(e.name);
        if (!b) fail(e.pos, "unknown function '" + e.name + "'");
        if (b->absorbing) {
            // def(expr): any evaluation failure inside the argument makes it
            // undefined rather than an error.
            try {
                eval(*e.args[0]);
                return Value(true);
            } catch (const EvalError&) {
                return Value(false);
            }
        }
        std::vector<Value> args;
        args.reserve(e.args.size());
        for (const auto& a : e.args) args.push_back(eval(*a));
        try {
            return b->fn(std::span<const Value>(args.data(), args.size()), ctx_);
        } catch (const EvalError&) {
            throw;
        } catch (const std::exception& ex) {
            fail(e.pos, std::string("builtin '") + e.name + "' failed: " + ex.what());
        }
    }

    Value eval_binary(const Expr& e) {
        const std::string& op = e.name;
        if (op == "&&") return Value(eval(*e.lhs).as_bool() && eval(*e.rhs).as_bool());
        if (op == "||") return Value(eval(*e.lhs).as_bool() || eval(*e.rhs).as_bool());

        Value l = eval(*e.lhs);
        Value r = eval(*e.rhs);

        if (op == "==" || op == "!=") {
            const bool eq = scalar_equals(l, r);
            return Value(op == "==" ? eq : !eq);
        }
        if (op == "<" || op == "<=" || op == ">" || op == ">=") return compare(e, l, r);
        return arithmetic(e, l, r);
    }

    static bool scalar_equals(const Value& l, const Value& r) {
        if (std::holds_alternative<EnumValue>(l.v))
            return std::get<EnumValue>(l.v) == std::get<EnumValue>(r.v);
        if (std::holds_alternative<bool>(l.v)) return l.as_bool() == r.as_bool();
        if (std::holds_alternative<std::string>(l.v)) return l.as_string() == r.as_string();
        if (std::holds_alternative<double>(l.v)) return l.as_float() == r.as_float();
        return l.as_int() == r.as_int();
    }

    Value compare(const Expr& e, const Value& l, const Value& r) const {
        int c;
        if (std::holds_alternative<std::string>(l.v))
            c = l.as_string().compare(r.as_string()) < 0   ? -1
                : l.as_string() == r.as_string() ? 0
                                                 : 1;
        else if (std::holds_alternative<double>(l.v))
            c = l.as_float() < r.as_float() ? -1 : l.as_float() == r.as_float() ? 0 : 1;
        else
            c = l.as_int() < r.as_int() ? -1 : l.as_int() == r.as_int() ? 0 : 1;
        const std::string& op = e.name;
        if (op == "<") return Value(c < 0);
        if (op == "<=") return Value(c <= 0);
        if (op == ">") return Value(c > 0);
        return Value(c >= 0);
    }

    Value arithmetic(const Expr& e, const Value& l, const Value& r) const {
        const char op = e.name[0];
        if (std::holds_alternative<std::string>(l.v)) // '+' only (typechecked)
            return Value(l.as_string() + r.as_string());
        if (std::holds_alternative<double>(l.v)) {
            const double a = l.as_float(), b = r.as_float();
            switch (op) {
            case '+': return Value(a + b);
            case '-': return Value(a - b);
            case '*': return Value(a * b);
            default: return Value(a / b); // IEEE semantics, no error
            }
        }
        const std::int64_t a = l.as_int(), b = r.as_int();
        std::int64_t out = 0;
        bool overflow = false;
        switch (op) {
        case '+': overflow = __builtin_add_overflow(a, b, &out); break;
        case '-': overflow = __builtin_sub_overflow(a, b, &out); break;
        case '*': overflow = __builtin_mul_overflow(a, b, &out); break;
        default:
            if (b == 0) fail(e.pos, "integer division by zero");
            if (a == std::numeric_limits<std::int64_t>::min() && b == -1)
                overflow = true;
            else
                out = a / b;
        }
        if (overflow) fail(e.pos, std::string("integer overflow in operator ") + op);
        return Value(out);
    }

    // --- visitor dispatch ---

    const query::VisitorClause* find_clause(const Expr* visitor, bool before,
                                            const char* type_name) const {
        const query::VisitorClause* wildcard = nullptr;
        for (const auto& c : visitor->clauses) {
            if (c.before != before) continue;
            if (c.node_type) {
                if (*c.node_type == type_name) return &c;
            } else if (!wildcard) {
                wildcard = &c;
            }
        }
        return wildcard;
    }

    // Runs one clause body in a fresh environment over the top-level scope.
    Flow run_clause(const query::VisitorClause& clause, const NodeRef& node) {
        std::vector<Scope> saved = std::move(scopes_);
        scopes_.clear();
        scopes_.push_back(saved.front()); // top-level bindings (copy)
        scopes_.emplace_back();
        if (clause.binder) scopes_.back()[*clause.binder] = Value(node);
        Flow flow = Flow::Normal;
        try {
            flow = exec(*clause.body);
        } catch (...) {
            scopes_ = std::move(saved);
            throw;
        }
        scopes_ = std::move(saved);
        return flow;
    }

    void dispatch(const NodeRef& node, const Expr* visitor) {
        const char* type_name = node_type_name(node);
        const Expr* outer = current_visitor_;
        current_visitor_ = visitor;

        bool stopped = false;
        if (const auto* clause = find_clause(visitor, /*before=*/true, type_name))
            stopped = run_clause(*clause, node) == Flow::Stopped;

        if (!stopped) descend(node, visitor);

        if (const auto* clause = find_clause(visitor, /*before=*/false, type_name))
            run_clause(*clause, node);

        current_visitor_ = outer;
    }

    void descend(const NodeRef& node, const Expr* visitor) {
        if (auto* p = std::get_if<const Project*>(&node)) {
            dispatch(NodeRef(&(*p)->repository), visitor);
        } else if (auto* r = std::get_if<const CodeRepository*>(&node)) {
            for (const auto& rev : (*r)->revisions) dispatch(NodeRef(&rev), visitor);
        } else if (auto* rev = std::get_if<const Revision*>(&node)) {
            for (const auto& f : (*rev)->files) dispatch(NodeRef(&f), visitor);
        } else if (auto* cf = std::get_if<const ChangedFile*>(&node)) {
            const ChangedFile& f = **cf;
            if (dataset_ && f.file_kind == FileKind::SOURCE_JAVA && !f.parse_error &&
                f.change_kind != ChangeKind::DELETED && !f.blob_hash.empty()) {
                if (auto ast = dataset_->find_ast(f.blob_hash)) dispatch(NodeRef(ast.get()), visitor);
            }
        } else if (auto* ar = std::get_if<const AstRoot*>(&node)) {
            dispatch(NodeRef(&(*ar)->ns), visitor);
        } else if (auto* ns = std::get_if<const Namespace*>(&node)) {
            for (const auto& d : (*ns)->declarations) dispatch(NodeRef(&d), visitor);
        } else if (auto* d = std::get_if<const Declaration*>(&node)) {
            for (const auto& m : (*d)->modifiers) dispatch(NodeRef(&m), visitor);
            for (const auto& f : (*d)->fields) dispatch(NodeRef(&f), visitor);
            for (const auto& m : (*d)->methods) dispatch(NodeRef(&m), visitor);
            for (const auto& n : (*d)->nested) dispatch(NodeRef(&n), visitor);
        } else if (auto* m = std::get_if<const Method*>(&node)) {
            for (const auto& mod : (*m)->modifiers) dispatch(NodeRef(&mod), visitor);
            for (const auto& p2 : (*m)->params) dispatch(NodeRef(&p2), visitor);
            for (const auto& s : (*m)->statements) dispatch(NodeRef(&s), visitor);
        } else if (auto* v = std::get_if<const Variable*>(&node)) {
            for (const auto& mod : (*v)->modifiers) dispatch(NodeRef(&mod), visitor);
        } else if (auto* st = std::get_if<const Statement*>(&node)) {
            for (const auto& ex : (*st)->expressions) dispatch(NodeRef(&ex), visitor);
            for (const auto& s : (*st)->statements) dispatch(NodeRef(&s), visitor);
        } else if (auto* ex = std::get_if<const Expression*>(&node)) {
            for (const auto& c : (*ex)->expressions) dispatch(NodeRef(&c), visitor);
        }
        // Modifier: leaf
    }

    const query::TypedProgram& prog_;
    const Project& project_;
    const DatasetReader* dataset_;
    const BuiltinRegistry& builtins_;
    AggregatorState& scratch_;
    EvalContext ctx_;
    std::vector<Scope> scopes_;
    const Expr* current_visitor_ = nullptr;
};

} // namespace

void evaluate_project(const query::TypedProgram& program, const Project& project,
                      const DatasetReader* dataset, const BuiltinRegistry& builtins,
                      AggregatorState& scratch) {
    Evaluator evaluator(program, project, dataset, builtins, scratch);
    evaluator.run();
}

std::string render_errors_report(const std::vector<ProjectError>& errors) {
    std::string out;
    for (const auto& e : errors) {
        out += e.project_id;
        out += '\t';
        out += std::to_string(e.pos.line) + ":" + std::to_string(e.pos.col);
        out += '\t';
        out += e.message;
        out += '\n';
    }
    return out;
}

ExecResult execute(const query::TypedProgram& program, const DatasetReader& dataset, int workers,
                   const BuiltinRegistry& builtins) {
    const auto specs = output_specs(program.program);
    const std::size_t n = dataset.project_count();
    const int w = std::max(1, workers);

    std::vector<AggregatorState> states(static_cast<std::size_t>(w), AggregatorState(specs));
    std::vector<std::vector<ProjectError>> worker_errors(static_cast<std::size_t>(w));

    auto work = [&](int worker_index) {
        // Projects are assigned round-robin by dataset order; merge order
        // within a worker follows ascending project index.
        for (std::size_t i = static_cast<std::size_t>(worker_index); i < n;
             i += static_cast<std::size_t>(w)) {
            Project project;
            try {
                project = dataset.load_project(i);
            } catch (const Error& e) {
                worker_errors[worker_index].push_back(
                    {i, "<record " + std::to_string(i) + ">", {0, 0}, e.what()});
                continue;
            }
            AggregatorState scratch(specs);
            try {
                evaluate_project(program, project, &dataset, builtins, scratch);
            } catch (const EvalError& e) {
                worker_errors[worker_index].push_back({i, project.id, e.pos(), e.what()});
                continue; // partial emissions discarded with the scratch state
            }
            states[worker_index].merge_from(scratch);
        }
    };

    if (w == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(w));
        for (int t = 0; t < w; ++t) threads.emplace_back(work, t);
        for (auto& t : threads) t.join();
    }

    // Pairwise fold in fixed worker order.
    AggregatorState merged(specs);
    for (const auto& s : states) merged.merge_from(s);

    ExecResult result;
    for (auto& errs : worker_errors)
        result.errors.insert(result.errors.end(), errs.begin(), errs.end());
    std::sort(result.errors.begin(), result.errors.end(),
              [](const ProjectError& a, const ProjectError& b) {
                  return a.project_index < b.project_index;
              });

    result.rows = output_rows(merged);
    result.rendered = render_rows(result.rows);
    return result;
}

} // namespace miner::engine
