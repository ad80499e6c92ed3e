#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace miner::query {

/// Static type of a query expression.
struct Type {
    enum class Kind { Invalid, Int, Float, String, Bool, Time, Array, Node, Enum, Visitor };

    Kind kind = Kind::Invalid;
    std::string name;                  // Node / Enum: schema type name
    std::shared_ptr<const Type> elem;  // Array element type

    static Type invalid() { return {}; }
    static Type int_() { return {Kind::Int, {}, nullptr}; }
    static Type float_() { return {Kind::Float, {}, nullptr}; }
    static Type string_() { return {Kind::String, {}, nullptr}; }
    static Type bool_() { return {Kind::Bool, {}, nullptr}; }
    static Type time_() { return {Kind::Time, {}, nullptr}; }
    static Type visitor() { return {Kind::Visitor, {}, nullptr}; }
    static Type node(std::string n) { return {Kind::Node, std::move(n), nullptr}; }
    static Type enum_(std::string n) { return {Kind::Enum, std::move(n), nullptr}; }
    static Type array(Type elem) {
        return {Kind::Array, {}, std::make_shared<const Type>(std::move(elem))};
    }

    bool valid() const { return kind != Kind::Invalid; }
    bool is_scalar() const {
        return kind == Kind::Int || kind == Kind::Float || kind == Kind::String ||
               kind == Kind::Bool || kind == Kind::Time;
    }
    bool is_numeric() const { return kind == Kind::Int || kind == Kind::Float; }

    friend bool operator==(const Type& a, const Type& b) {
        if (a.kind != b.kind || a.name != b.name) return false;
        if (!a.elem && !b.elem) return true;
        if (!a.elem || !b.elem) return false;
        return *a.elem == *b.elem;
    }
};

std::string to_string(const Type& t);

/// Field table for one schema node type, in traversal (= serialization) order.
using FieldList = std::vector<std::pair<std::string, Type>>;

const std::map<std::string, FieldList>& schema_node_fields();
const std::map<std::string, std::vector<std::string>>& schema_enums();

bool is_schema_node_type(const std::string& name);
/// Index of `member` in the enum's member list, or -1.
int schema_enum_member_index(const std::string& enum_name, const std::string& member);

} // namespace miner::query
