#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

// The mining schema: the tree of record types every query traverses.
// Field order in these structs is the canonical serialization order.

namespace miner {

/// Microseconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

enum class ChangeKind { ADDED, MODIFIED, DELETED };
enum class FileKind { SOURCE_JAVA, OTHER };
enum class DeclarationKind { CLASS, INTERFACE, ENUM, ANNOTATION_DECL };
enum class StatementKind { BLOCK, IF, FOR, WHILE, RETURN, EXPR, OTHER };
enum class ExpressionKind { CALL, LITERAL, OTHER };
enum class ModifierKind { VISIBILITY, STATIC, FINAL, ABSTRACT, SYNCHRONIZED, ANNOTATION, OTHER };

const char* to_string(ChangeKind k);
const char* to_string(FileKind k);
const char* to_string(DeclarationKind k);
const char* to_string(StatementKind k);
const char* to_string(ExpressionKind k);
const char* to_string(ModifierKind k);

struct Modifier {
    ModifierKind kind = ModifierKind::OTHER;
    std::string visibility;      // VISIBILITY only: "public" | "private" | "protected"
    std::string annotation_name; // ANNOTATION only, nonempty
    std::string other;

    bool operator==(const Modifier&) const = default;
};

struct Expression {
    ExpressionKind kind = ExpressionKind::OTHER;
    std::string method_name; // CALL only
    std::string literal;     // LITERAL only
    std::vector<Expression> expressions;

    bool operator==(const Expression&) const = default;
};

struct Statement {
    StatementKind kind = StatementKind::OTHER;
    std::vector<Statement> statements;
    std::vector<Expression> expressions;

    bool operator==(const Statement&) const = default;
};

struct Variable {
    std::string name;
    std::string type_name;
    std::vector<Modifier> modifiers;

    bool operator==(const Variable&) const = default;
};

struct Method {
    std::string name;
    std::vector<Modifier> modifiers;
    std::string return_type_name;
    std::vector<Variable> params;
    std::vector<Statement> statements;

    bool operator==(const Method&) const = default;
};

struct Declaration {
    std::string name;
    DeclarationKind kind = DeclarationKind::CLASS;
    std::vector<Modifier> modifiers;
    std::vector<Variable> fields;
    std::vector<Method> methods;
    std::vector<Declaration> nested;

    bool operator==(const Declaration&) const = default;
};

struct Namespace {
    std::string name; // package name, "" if none
    std::vector<std::string> imports;
    std::vector<Declaration> declarations;

    bool operator==(const Namespace&) const = default;
};

struct AstRoot {
    Namespace ns; // serialized under the key "namespace"

    bool operator==(const AstRoot&) const = default;
};

struct ChangedFile {
    std::string path; // repository-relative, '/'-separated
    ChangeKind change_kind = ChangeKind::ADDED;
    FileKind file_kind = FileKind::OTHER;
    std::string blob_hash; // SHA-256 of the blob bytes, lowercase hex; empty for DELETED
    bool parse_error = false;

    bool operator==(const ChangedFile&) const = default;
};

struct Revision {
    std::string id; // commit hash, lowercase hex
    std::string author;
    std::string committer;
    Timestamp commit_time = 0;
    std::string log;
    std::vector<ChangedFile> files; // sorted strictly ascending by path

    bool operator==(const Revision&) const = default;
};

struct CodeRepository {
    std::string url;
    std::optional<std::size_t> head_index; // absent iff revisions empty
    std::vector<Revision> revisions;       // sorted ascending by (commit_time, id)

    bool operator==(const CodeRepository&) const = default;
};

struct Project {
    std::string id; // stable unique identifier, e.g. "owner/name"
    std::string name;
    std::string url;
    std::int64_t stars = 0;
    Timestamp created = 0;
    std::vector<std::pair<std::string, std::string>> metadata; // ordered
    CodeRepository repository;

    bool operator==(const Project&) const = default;
};

struct DatasetManifest {
    std::int64_t format_version = 1;
    std::string name;
    Timestamp created = 0;
    std::int64_t project_count = 0;
    std::int64_t ast_count = 0;

    bool operator==(const DatasetManifest&) const = default;
};

} // namespace miner
