#include "miner/query/types.hpp"

#include <algorithm>

namespace miner::query {

namespace {

std::map<std::string, FieldList> build_fields() {
    const Type s = Type::string_();
    const Type i = Type::int_();
    const Type b = Type::bool_();
    const Type t = Type::time_();
    auto node = [](const char* n) { return Type::node(n); };
    auto arr = [](Type e) { return Type::array(std::move(e)); };

    std::map<std::string, FieldList> f;
    f["Project"] = {{"id", s},      {"name", s},    {"url", s},
                    {"stars", i},   {"created", t}, {"repository", node("CodeRepository")}};
    f["CodeRepository"] = {{"url", s}, {"head_index", i}, {"revisions", arr(node("Revision"))}};
    f["Revision"] = {{"id", s},          {"author", s}, {"committer", s},
                     {"commit_time", t}, {"log", s},    {"files", arr(node("ChangedFile"))}};
    f["ChangedFile"] = {{"path", s},
                        {"change_kind", Type::enum_("ChangeKind")},
                        {"file_kind", Type::enum_("FileKind")},
                        {"blob_hash", s},
                        {"parse_error", b}};
    f["ASTRoot"] = {{"namespace", node("Namespace")}};
    f["Namespace"] = {{"name", s}, {"imports", arr(s)}, {"declarations", arr(node("Declaration"))}};
    f["Declaration"] = {{"name", s},
                        {"kind", Type::enum_("DeclarationKind")},
                        {"modifiers", arr(node("Modifier"))},
                        {"fields", arr(node("Variable"))},
                        {"methods", arr(node("Method"))},
                        {"nested", arr(node("Declaration"))}};
    f["Method"] = {{"name", s},
                   {"modifiers", arr(node("Modifier"))},
                   {"return_type_name", s},
                   {"params", arr(node("Variable"))},
                   {"statements", arr(node("Statement"))}};
    f["Variable"] = {{"name", s}, {"type_name", s}, {"modifiers", arr(node("Modifier"))}};
    f["Statement"] = {{"kind", Type::enum_("StatementKind")},
                      {"statements", arr(node("Statement"))},
                      {"expressions", arr(node("Expression"))}};
    f["Expression"] = {{"kind", Type::enum_("ExpressionKind")},
                       {"method_name", s},
                       {"literal", s},
                       {"expressions", arr(node("Expression"))}};
    f["Modifier"] = {{"kind", Type::enum_("ModifierKind")},
                     {"visibility", s},
                     {"annotation_name", s},
                     {"other", s}};
    return f;
}

std::map<std::string, std::vector<std::string>> build_enums() {
    std::map<std::string, std::vector<std::string>> e;
    e["ChangeKind"] = {"ADDED", "MODIFIED", "DELETED"};
    e["FileKind"] = {"SOURCE_JAVA", "OTHER"};
    e["DeclarationKind"] = {"CLASS", "INTERFACE", "ENUM", "ANNOTATION_DECL"};
    e["StatementKind"] = {"BLOCK", "IF", "FOR", "WHILE", "RETURN", "EXPR", "OTHER"};
    e["ExpressionKind"] = {"CALL", "LITERAL", "OTHER"};
    e["ModifierKind"] = {"VISIBILITY", "STATIC",      "FINAL", "ABSTRACT",
                         "SYNCHRONIZED", "ANNOTATION", "OTHER"};
    return e;
}

} // namespace

const std::map<std::string, FieldList>& schema_node_fields() {
    static const auto fields = build_fields();
    return fields;
}

const std::map<std::string, std::vector<std::string>>& schema_enums() {
    static const auto enums = build_enums();
    return enums;
}

bool is_schema_node_type(const std::string& name) { return schema_node_fields().count(name) > 0; }

int schema_enum_member_index(const std::string& enum_name, const std::string& member) {
    const auto& enums = schema_enums();
    auto it = enums.find(enum_name);
    if (it == enums.end()) return -1;
    auto pos = std::find(it->second.begin(), it->second.end(), member);
    if (pos == it->second.end()) return -1;
    return static_cast<int>(pos - it->second.begin());
}

} // namespace miner::query
