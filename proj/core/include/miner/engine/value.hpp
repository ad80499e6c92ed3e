#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "miner/query/ast.hpp"
#include "miner/schema.hpp"

namespace miner::engine {

/// Reference to a schema node owned by the currently evaluated project (or
/// by the dataset's AST store).
using NodeRef =
    std::variant<const Project*, const CodeRepository*, const Revision*, const ChangedFile*,
                 const AstRoot*, const Namespace*, const Declaration*, const Method*,
                 const Variable*, const Statement*, const Expression*, const Modifier*>;

struct EnumValue {
    std::int32_t ordinal = 0;
    friend bool operator==(EnumValue a, EnumValue b) { return a.ordinal == b.ordinal; }
};

/// A runtime value. int and time share the integer representation; the
/// typechecker keeps them apart statically.
struct Value {
    using Array = std::shared_ptr<const std::vector<Value>>;

    std::variant<std::monostate, std::int64_t, double, bool, std::string, EnumValue, NodeRef,
                 Array, const query::Expr*>
        v;

    Value() = default;
    Value(std::int64_t i) : v(i) {}
    Value(double d) : v(d) {}
    Value(bool b) : v(b) {}
    Value(std::string s) : v(std::move(s)) {}
    Value(EnumValue e) : v(e) {}
    Value(NodeRef n) : v(n) {}
    Value(Array a) : v(std::move(a)) {}
    Value(const query::Expr* visitor) : v(visitor) {}

    std::int64_t as_int() const { return std::get<std::int64_t>(v); }
    double as_float() const { return std::get<double>(v); }
    bool as_bool() const { return std::get<bool>(v); }
    const std::string& as_string() const { return std::get<std::string>(v); }
    EnumValue as_enum() const { return std::get<EnumValue>(v); }
    NodeRef as_node() const { return std::get<NodeRef>(v); }
    const Array& as_array() const { return std::get<Array>(v); }
    const query::Expr* as_visitor() const { return std::get<const query::Expr*>(v); }
};

/// Renders a scalar the way result tables do: ints/times in decimal, bools
/// as true/false, strings verbatim, floats as the shortest round-tripping
/// decimal (integral values get a trailing ".0").
std::string render_scalar(const Value& value);

std::string render_float(double v);

} // namespace miner::engine
