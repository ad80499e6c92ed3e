#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "miner/schema.hpp"

namespace miner {

/// One repository to clone: an "owner/name" pair, a local path, or a URL.
struct CloneSource {
    std::string display;  // label used in reports, e.g. "octo/demo"
    std::string url;      // what git clone receives
    std::string dir_name; // destination subdirectory, e.g. "octo__demo"
};

/// Resolves one --repos line (owner/name, path, or URL) to a clone source.
CloneSource resolve_clone_source(const std::string& line);

struct CloneReport {
    int requested = 0;
    std::vector<std::string> succeeded;
    std::vector<std::pair<std::string, std::string>> failed; // (name, reason)
};

/// Bare-clones each source under dest/<dir_name>, up to `jobs` at a time.
/// Existing directories count as succeeded without touching the network.
/// Individual failures never abort the remaining clones. All git calls are
/// non-interactive; authentication is whatever ambient git config provides.
CloneReport clone_repositories(const std::vector<CloneSource>& sources,
                               const std::filesystem::path& dest, int jobs);

/// Called once per distinct blob encountered while extracting history.
using BlobSink =
    std::function<void(const std::string& sha256, FileKind kind, const std::string& bytes)>;

/// Linearizes all commits reachable from the default branch head into a
/// CodeRepository: revisions ordered by (commit_time, id), per-commit files
/// diffed against the first parent (root commits add everything), paths
/// sorted, blob_hash = SHA-256 of the post-change blob bytes.
CodeRepository extract_history(const std::filesystem::path& repo_path,
                               const BlobSink& on_blob = {});

} // namespace miner
