#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "miner/schema.hpp"

namespace miner::github {

struct RepoMetadata {
    std::string full_name; // "owner/name"
    std::string html_url;
    std::int64_t stargazers_count = 0;
    bool fork = false;
    std::string default_branch;
    std::optional<std::string> language;
    Timestamp created_at = 0;
};

struct SearchCriteria {
    std::string query;
    std::int64_t min_stars = 0;
    std::optional<std::string> language;
    int max_results = 100; // API search cap: 1000

    void check() const;
};

struct ClientOptions {
    std::string api_base = "https://api.github.com";
    std::optional<std::string> token;
    int retries = 3;                                  // after the first attempt
    std::chrono::milliseconds retry_base_delay{1000}; // 1s, 2s, 4s
};

class Client {
public:
    explicit Client(ClientOptions opts) : opts_(std::move(opts)) {}

    /// Search matching repositories, deduplicated by full_name, descending
    /// stargazers_count, at most criteria.max_results entries.
    std::vector<RepoMetadata> list_repositories(const SearchCriteria& criteria) const;

    /// Raw /repos/{owner}/{name} response body. Throws NetworkError (404
    /// carries status), RateLimitError, FormatError.
    std::string fetch_repo_json(const std::string& full_name) const;

    /// Raw search page body (used by list_repositories; exposed for tools).
    std::string get(const std::string& path) const;

    const ClientOptions& options() const { return opts_; }

private:
    ClientOptions opts_;
};

RepoMetadata repo_metadata_from_json(std::string_view body);
std::string to_json(const RepoMetadata& meta);

/// Parses "2011-01-26T19:01:12Z" into microseconds since epoch (UTC).
std::optional<Timestamp> parse_iso8601_utc(std::string_view text);
std::string format_iso8601_utc(Timestamp t);

struct FetchOutcome {
    std::vector<std::filesystem::path> written;
    std::vector<std::filesystem::path> skipped; // already present, no --force
    std::vector<std::pair<std::string, std::string>> failed; // (name, reason)
};

/// Writes one JSON file per repo at out_dir/<owner>__<name>.json with the
/// API response verbatim. 404s are per-name failures; rate limiting aborts.
FetchOutcome fetch_repo_metadata(const std::vector<std::string>& full_names,
                                 const std::filesystem::path& out_dir, const Client& client,
                                 bool force = false);

} // namespace miner::github
