#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "miner/schema.hpp"

namespace miner {

struct BuildOptions {
    std::filesystem::path clones_root;
    std::optional<std::filesystem::path> metadata_dir;
    std::filesystem::path out_dir;
    std::string name;
    int jobs = 1;
    /// Called after each repository finishes (any thread, serialized).
    std::function<void(std::size_t done, std::size_t total)> progress;
};

struct BuildReport {
    DatasetManifest manifest;
    std::int64_t repositories = 0;
    std::int64_t revisions = 0;
    std::int64_t distinct_asts = 0;
    std::int64_t parse_failures = 0;
    std::vector<std::pair<std::string, std::string>> skipped; // (dir, reason)
};

/// Builds a dataset from every clone directory under clones_root: extracts
/// history, parses each distinct java blob exactly once, joins optional
/// GitHub metadata, writes the dataset. The output is a pure function of
/// repository content — independent of `jobs` and of wall-clock time (the
/// manifest timestamp is the newest commit time in the corpus).
BuildReport build_dataset(const BuildOptions& options);

} // namespace miner
