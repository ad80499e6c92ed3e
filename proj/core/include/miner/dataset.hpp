#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "miner/schema.hpp"

namespace miner {

/// Writes an immutable dataset directory:
///   <dir>/manifest.json   \n-terminated JSON object
///   <dir>/projects.jsonl  one project per line, sorted by id
///   <dir>/asts.jsonl      one {"blob_hash","ast"} per line, sorted by hash
/// Refuses to write into an existing nonempty directory. Output bytes are a
/// pure function of the logical input.
DatasetManifest write_dataset(const std::vector<Project>& projects,
                              const std::map<std::string, AstRoot>& ast_store,
                              const std::filesystem::path& dir,
                              const std::string& name,
                              Timestamp created = 0);

/// Read-only handle over a dataset directory. Loads record lines up front;
/// per-project JSON decode happens on access, so concurrent readers need no
/// coordination.
class DatasetReader {
public:
    explicit DatasetReader(const std::filesystem::path& dir);

    const DatasetManifest& manifest() const { return manifest_; }
    const std::filesystem::path& dir() const { return dir_; }

    std::size_t project_count() const { return project_lines_.size(); }
    /// Decodes project `index`. Thread-safe.
    Project load_project(std::size_t index) const;
    /// Raw JSONL record for project `index`.
    const std::string& project_line(std::size_t index) const { return project_lines_[index]; }

    /// AST lookup by blob hash; null when absent.
    std::shared_ptr<const AstRoot> find_ast(const std::string& blob_hash) const;
    std::size_t ast_count() const { return asts_.size(); }

private:
    std::filesystem::path dir_;
    DatasetManifest manifest_;
    std::vector<std::string> project_lines_;
    std::map<std::string, std::shared_ptr<const AstRoot>> asts_;
};

struct ValidationIssue {
    std::string check;   // "manifest-counts" | "revision-order" | "file-order"
                         // | "dangling-blob" | "enum-validity" | "format"
    std::string subject; // project id / revision id / file, best effort
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    std::int64_t projects_seen = 0;
    std::int64_t asts_seen = 0;
    bool ok() const { return issues.empty(); }
};

/// Structural validation of a dataset directory. Problems are report
/// entries, not exceptions.
ValidationReport validate_dataset(const std::filesystem::path& dir);

} // namespace miner
