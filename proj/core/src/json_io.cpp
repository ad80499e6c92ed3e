#include "miner/json_io.hpp"

#include <nlohmann/json.hpp>

#include "miner/errors.hpp"

namespace miner {

using ojson = nlohmann::ordered_json;

namespace {

template <typename E>
E enum_from_name(const ojson& j, const char* what,
                 std::initializer_list<std::pair<const char*, E>> table) {
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        for (const auto& [name, value] : table)
            if (s == name) return value;
    }
    throw FormatError(std::string("invalid ") + what + " value: " + j.dump());
}

ChangeKind change_kind_from(const ojson& j) {
    return enum_from_name<ChangeKind>(j, "change_kind",
                                      {{"ADDED", ChangeKind::ADDED},
                                       {"MODIFIED", ChangeKind::MODIFIED},
                                       {"DELETED", ChangeKind::DELETED}});
}

FileKind file_kind_from(const ojson& j) {
    return enum_from_name<FileKind>(j, "file_kind",
                                    {{"SOURCE_JAVA", FileKind::SOURCE_JAVA},
                                     {"OTHER", FileKind::OTHER}});
}

DeclarationKind decl_kind_from(const ojson& j) {
    return enum_from_name<DeclarationKind>(j, "declaration kind",
                                           {{"CLASS", DeclarationKind::CLASS},
                                            {"INTERFACE", DeclarationKind::INTERFACE},
                                            {"ENUM", DeclarationKind::ENUM},
                                            {"ANNOTATION_DECL", DeclarationKind::ANNOTATION_DECL}});
}

StatementKind stmt_kind_from(const ojson& j) {
    return enum_from_name<StatementKind>(j, "statement kind",
                                         {{"BLOCK", StatementKind::BLOCK},
                                          {"IF", StatementKind::IF},
                                          {"FOR", StatementKind::FOR},
                                          {"WHILE", StatementKind::WHILE},
                                          {"RETURN", StatementKind::RETURN},
                                          {"EXPR", StatementKind::EXPR},
                                          {"OTHER", StatementKind::OTHER}});
}

ExpressionKind expr_kind_from(const ojson& j) {
    return enum_from_name<ExpressionKind>(j, "expression kind",
                                          {{"CALL", ExpressionKind::CALL},
                                           {"LITERAL", ExpressionKind::LITERAL},
                                           {"OTHER", ExpressionKind::OTHER}});
}

ModifierKind mod_kind_from(const ojson& j) {
    return enum_from_name<ModifierKind>(j, "modifier kind",
                                        {{"VISIBILITY", ModifierKind::VISIBILITY},
                                         {"STATIC", ModifierKind::STATIC},
                                         {"FINAL", ModifierKind::FINAL},
                                         {"ABSTRACT", ModifierKind::ABSTRACT},
                                         {"SYNCHRONIZED", ModifierKind::SYNCHRONIZED},
                                         {"ANNOTATION", ModifierKind::ANNOTATION},
                                         {"OTHER", ModifierKind::OTHER}});
}

ojson to_ojson(const Modifier& m) {
    return ojson{{"kind", to_string(m.kind)},
                 {"visibility", m.visibility},
                 {"annotation_name", m.annotation_name},
                 {"other", m.other}};
}

ojson to_ojson(const Expression& e) {
    ojson children = ojson::array();
    for (const auto& c : e.expressions) children.push_back(to_ojson(c));
    return ojson{{"kind", to_string(e.kind)},
                 {"method_name", e.method_name},
                 {"literal", e.literal},
                 {"expressions", std::move(children)}};
}

ojson to_ojson(const Statement& s) {
    ojson stmts = ojson::array();
    for (const auto& c : s.statements) stmts.push_back(to_ojson(c));
    ojson exprs = ojson::array();
    for (const auto& e : s.expressions) exprs.push_back(to_ojson(e));
    return ojson{{"kind", to_string(s.kind)},
                 {"statements", std::move(stmts)},
                 {"expressions", std::move(exprs)}};
}

ojson to_ojson(const Variable& v) {
    ojson mods = ojson::array();
    for (const auto& m : v.modifiers) mods.push_back(to_ojson(m));
    return ojson{{"name", v.name}, {"type_name", v.type_name}, {"modifiers", std::move(mods)}};
}

ojson to_ojson(const Method& m) {
    ojson mods = ojson::array();
    for (const auto& x : m.modifiers) mods.push_back(to_ojson(x));
    ojson params = ojson::array();
    for (const auto& p : m.params) params.push_back(to_ojson(p));
    ojson stmts = ojson::array();
    for (const auto& s : m.statements) stmts.push_back(to_ojson(s));
    return ojson{{"name", m.name},
                 {"modifiers", std::move(mods)},
                 {"return_type_name", m.return_type_name},
                 {"params", std::move(params)},
                 {"statements", std::move(stmts)}};
}

ojson to_ojson(const Declaration& d) {
    ojson mods = ojson::array();
    for (const auto& m : d.modifiers) mods.push_back(to_ojson(m));
    ojson fields = ojson::array();
    for (const auto& f : d.fields) fields.push_back(to_ojson(f));
    ojson methods = ojson::array();
    for (const auto& m : d.methods) methods.push_back(to_ojson(m));
    ojson nested = ojson::array();
    for (const auto& n : d.nested) nested.push_back(to_ojson(n));
    return ojson{{"name", d.name},
                 {"kind", to_string(d.kind)},
                 {"modifiers", std::move(mods)},
                 {"fields", std::move(fields)},
                 {"methods", std::move(methods)},
                 {"nested", std::move(nested)}};
}

ojson to_ojson(const Namespace& n) {
    ojson decls = ojson::array();
    for (const auto& d : n.declarations) decls.push_back(to_ojson(d));
    return ojson{{"name", n.name}, {"imports", n.imports}, {"declarations", std::move(decls)}};
}

ojson to_ojson(const AstRoot& a) { return ojson{{"namespace", to_ojson(a.ns)}}; }

ojson to_ojson(const ChangedFile& f) {
    return ojson{{"path", f.path},
                 {"change_kind", to_string(f.change_kind)},
                 {"file_kind", to_string(f.file_kind)},
                 {"blob_hash", f.blob_hash},
                 {"parse_error", f.parse_error}};
}

ojson to_ojson(const Revision& r) {
    ojson files = ojson::array();
    for (const auto& f : r.files) files.push_back(to_ojson(f));
    return ojson{{"id", r.id},
                 {"author", r.author},
                 {"committer", r.committer},
                 {"commit_time", r.commit_time},
                 {"log", r.log},
                 {"files", std::move(files)}};
}

ojson to_ojson(const CodeRepository& r) {
    ojson revisions = ojson::array();
    for (const auto& rev : r.revisions) revisions.push_back(to_ojson(rev));
    ojson head = r.head_index ? ojson(*r.head_index) : ojson(nullptr);
    return ojson{{"url", r.url}, {"head_index", std::move(head)}, {"revisions", std::move(revisions)}};
}

ojson to_ojson(const Project& p) {
    ojson meta = ojson::object();
    for (const auto& [k, v] : p.metadata) meta[k] = v;
    return ojson{{"id", p.id},
                 {"name", p.name},
                 {"url", p.url},
                 {"stars", p.stars},
                 {"created", p.created},
                 {"metadata", std::move(meta)},
                 {"repository", to_ojson(p.repository)}};
}

Modifier modifier_from(const ojson& j) {
    Modifier m;
    m.kind = mod_kind_from(j.at("kind"));
    m.visibility = j.at("visibility").get<std::string>();
    m.annotation_name = j.at("annotation_name").get<std::string>();
    m.other = j.at("other").get<std::string>();
    return m;
}

Expression expression_from(const ojson& j) {
    Expression e;
    e.kind = expr_kind_from(j.at("kind"));
    e.method_name = j.at("method_name").get<std::string>();
    e.literal = j.at("literal").get<std::string>();
    for (const auto& c : j.at("expressions")) e.expressions.push_back(expression_from(c));
    return e;
}

Statement statement_from(const ojson& j) {
    Statement s;
    s.kind = stmt_kind_from(j.at("kind"));
    for (const auto& c : j.at("statements")) s.statements.push_back(statement_from(c));
    for (const auto& e : j.at("expressions")) s.expressions.push_back(expression_from(e));
    return s;
}

Variable variable_from(const ojson& j) {
    Variable v;
    v.name = j.at("name").get<std::string>();
    v.type_name = j.at("type_name").get<std::string>();
    for (const auto& m : j.at("modifiers")) v.modifiers.push_back(modifier_from(m));
    return v;
}

Method method_from(const ojson& j) {
    Method m;
    m.name = j.at("name").get<std::string>();
    for (const auto& x : j.at("modifiers")) m.modifiers.push_back(modifier_from(x));
    m.return_type_name = j.at("return_type_name").get<std::string>();
    for (const auto& p : j.at("params")) m.params.push_back(variable_from(p));
    for (const auto& s : j.at("statements")) m.statements.push_back(statement_from(s));
    return m;
}

Declaration declaration_from(const ojson& j) {
    Declaration d;
    d.name = j.at("name").get<std::string>();
    d.kind = decl_kind_from(j.at("kind"));
    for (const auto& m : j.at("modifiers")) d.modifiers.push_back(modifier_from(m));
    for (const auto& f : j.at("fields")) d.fields.push_back(variable_from(f));
    for (const auto& m : j.at("methods")) d.methods.push_back(method_from(m));
    for (const auto& n : j.at("nested")) d.nested.push_back(declaration_from(n));
    return d;
}

Namespace namespace_from(const ojson& j) {
    Namespace n;
    n.name = j.at("name").get<std::string>();
    for (const auto& i : j.at("imports")) n.imports.push_back(i.get<std::string>());
    for (const auto& d : j.at("declarations")) n.declarations.push_back(declaration_from(d));
    return n;
}

AstRoot astroot_from(const ojson& j) {
    AstRoot a;
    a.ns = namespace_from(j.at("namespace"));
    return a;
}

ChangedFile changed_file_from(const ojson& j) {
    ChangedFile f;
    f.path = j.at("path").get<std::string>();
    f.change_kind = change_kind_from(j.at("change_kind"));
    f.file_kind = file_kind_from(j.at("file_kind"));
    f.blob_hash = j.at("blob_hash").get<std::string>();
    f.parse_error = j.at("parse_error").get<bool>();
    return f;
}

Revision revision_from(const ojson& j) {
    Revision r;
    r.id = j.at("id").get<std::string>();
    r.author = j.at("author").get<std::string>();
    r.committer = j.at("committer").get<std::string>();
    r.commit_time = j.at("commit_time").get<std::int64_t>();
    r.log = j.at("log").get<std::string>();
    for (const auto& f : j.at("files")) r.files.push_back(changed_file_from(f));
    return r;
}

CodeRepository repository_from(const ojson& j) {
    CodeRepository r;
    r.url = j.at("url").get<std::string>();
    const auto& head = j.at("head_index");
    if (!head.is_null()) r.head_index = head.get<std::size_t>();
    for (const auto& rev : j.at("revisions")) r.revisions.push_back(revision_from(rev));
    return r;
}

Project project_from(const ojson& j) {
    Project p;
    p.id = j.at("id").get<std::string>();
    p.name = j.at("name").get<std::string>();
    p.url = j.at("url").get<std::string>();
    p.stars = j.at("stars").get<std::int64_t>();
    p.created = j.at("created").get<std::int64_t>();
    for (const auto& [k, v] : j.at("metadata").items())
        p.metadata.emplace_back(k, v.get<std::string>());
    p.repository = repository_from(j.at("repository"));
    return p;
}

ojson parse_checked(std::string_view text, const char* what) {
    ojson j = ojson::parse(text, nullptr, false);
    if (j.is_discarded()) throw FormatError(std::string("malformed JSON in ") + what);
    return j;
}

} // namespace

std::string to_json(const DatasetManifest& m) {
    return ojson{{"format_version", m.format_version},
                 {"name", m.name},
                 {"created", m.created},
                 {"project_count", m.project_count},
                 {"ast_count", m.ast_count}}
        .dump();
}

std::string to_json(const Project& p) { return to_ojson(p).dump(); }
std::string to_json(const AstRoot& ast) { return to_ojson(ast).dump(); }

std::string project_json_line(const Project& p) { return to_ojson(p).dump(); }

std::string ast_json_line(const std::string& blob_hash, const AstRoot& ast) {
    return ojson{{"blob_hash", blob_hash}, {"ast", to_ojson(ast)}}.dump();
}

DatasetManifest manifest_from_json(std::string_view text) {
    ojson j = parse_checked(text, "manifest");
    DatasetManifest m;
    try {
        m.format_version = j.at("format_version").get<std::int64_t>();
        m.name = j.at("name").get<std::string>();
        m.created = j.at("created").get<std::int64_t>();
        m.project_count = j.at("project_count").get<std::int64_t>();
        m.ast_count = j.at("ast_count").get<std::int64_t>();
    } catch (const ojson::exception& e) {
        throw FormatError(std::string("malformed manifest: ") + e.what());
    }
    return m;
}

Project project_from_json(std::string_view text) {
    ojson j = parse_checked(text, "project record");
    try {
        return project_from(j);
    } catch (const ojson::exception& e) {
        throw FormatError(std::string("malformed project record: ") + e.what());
    }
}

std::pair<std::string, AstRoot> ast_from_json_line(std::string_view text) {
    ojson j = parse_checked(text, "ast record");
    try {
        return {j.at("blob_hash").get<std::string>(), astroot_from(j.at("ast"))};
    } catch (const ojson::exception& e) {
        throw FormatError(std::string("malformed ast record: ") + e.what());
    }
}

} // namespace miner
