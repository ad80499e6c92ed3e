#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "miner/schema.hpp"

namespace minertest {

namespace fs = std::filesystem;

/// Unique directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag = "miner-test");
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const fs::path& path() const { return path_; }
    fs::path operator/(const std::string& sub) const { return path_ / sub; }

private:
    fs::path path_;
};

/// Scripted git repository with deterministic commits.
class GitRepoBuilder {
public:
    GitRepoBuilder(fs::path where, const std::string& branch = "main");

    void write(const std::string& rel_path, const std::string& content);
    void remove(const std::string& rel_path);
    /// Commits staged changes at the given unix time; returns the commit id.
    std::string commit(const std::string& message, std::int64_t unix_seconds,
                       bool allow_empty = false);
    std::string checkout_new_branch(const std::string& name, const std::string& from = "");
    void checkout(const std::string& name);
    /// Merge (no fast-forward) at the given time; returns the merge commit id.
    std::string merge(const std::string& branch, const std::string& message,
                      std::int64_t unix_seconds);
    std::string head() const;

    const fs::path& path() const { return path_; }

private:
    std::string git(const std::vector<std::string>& args, std::int64_t when = 0) const;
    fs::path path_;
};

/// The three scripted repositories used end to end: known annotation counts
/// at head, including one annotation removed before head and one merge.
struct FixtureRepos {
    fs::path root;                      // contains alpha__util, beta__core, gamma__app
    std::vector<std::string> dir_names; // sorted
    std::vector<fs::path> worktrees;    // same order
    // Annotation counts at head, per project id (sorted by id).
    std::vector<std::pair<std::string, int>> expected_annotations;
};

FixtureRepos make_fixture_repos(const fs::path& root);

/// Synthetic dataset written straight through write_dataset: `projects`
/// projects, each with one revision holding one parsed java file of
/// `methods` methods carrying `annotations_per_method` annotations each.
void write_synthetic_dataset(const fs::path& dir, int projects, int methods,
                             int annotations_per_method, const std::string& name = "synthetic");

/// In-memory project with a single revision containing the given parsed
/// sources (path -> content). ASTs land in `ast_store`.
miner::Project make_project(const std::string& id,
                            const std::vector<std::pair<std::string, std::string>>& sources,
                            std::map<std::string, miner::AstRoot>& ast_store,
                            std::int64_t commit_seconds = 1577836800 /* 2020-01-01 */);

} // namespace minertest
