#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "miner/github.hpp"

#include <algorithm>
#include <cstring>
#include <ctime>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "miner/errors.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace miner::github {

namespace {

constexpr int kSearchCap = 1000;
constexpr int kPerPage = 100;

std::string url_encode(const std::string& s) {
    static const char hex[] = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : s) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 0xf];
        }
    }
    return out;
}

struct Response {
    int status = 0;
    std::string body;
    httplib::Headers headers;
};

std::int64_t header_i64(const httplib::Headers& headers, const char* name, std::int64_t dflt) {
    auto it = headers.find(name);
    if (it == headers.end()) return dflt;
    return std::strtoll(it->second.c_str(), nullptr, 10);
}

bool rate_limited(const Response& r) {
    if (r.status != 403 && r.status != 429) return false;
    return header_i64(r.headers, "X-RateLimit-Remaining", -1) == 0;
}

// GET with the retry policy: up to opts.retries extra attempts with
// exponential backoff on 5xx and connection errors. Rate-limit responses are
// surfaced immediately, never retried blindly.
Response get_with_retries(const ClientOptions& opts, const std::string& path) {
    std::string last_error;
    for (int attempt = 0; attempt <= opts.retries; ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(opts.retry_base_delay * (1 << (attempt - 1)));

        httplib::Client client(opts.api_base);
        client.set_follow_location(true);
        client.set_connection_timeout(30);
        client.set_read_timeout(60);
        httplib::Headers headers{{"Accept", "application/vnd.github+json"},
                                 {"User-Agent", "miner"}};
        if (opts.token) headers.emplace("Authorization", "Bearer " + *opts.token);

        auto res = client.Get(path, headers);
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        Response r{res->status, res->body, res->headers};
        if (rate_limited(r)) {
            const std::int64_t reset = header_i64(r.headers, "X-RateLimit-Reset", 0);
            throw RateLimitError("GitHub API rate limit exhausted for " + path +
                                     "; resets at " + std::to_string(reset),
                                 reset);
        }
        if (r.status >= 500) {
            last_error = "server returned " + std::to_string(r.status);
            continue;
        }
        return r;
    }
    throw NetworkError("GET " + opts.api_base + path + " failed after retries: " + last_error, 0);
}

RepoMetadata metadata_from(const json& item) {
    RepoMetadata m;
    m.full_name = item.at("full_name").get<std::string>();
    m.html_url = item.value("html_url", "");
    m.stargazers_count = item.value("stargazers_count", std::int64_t{0});
    m.fork = item.value("fork", false);
    m.default_branch = item.value("default_branch", "");
    if (item.contains("language") && item["language"].is_string())
        m.language = item["language"].get<std::string>();
    if (item.contains("created_at") && item["created_at"].is_string())
        if (auto t = parse_iso8601_utc(item["created_at"].get<std::string>())) m.created_at = *t;
    return m;
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::tolower(static_cast<unsigned char>(a[i])) !=
            std::tolower(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

} // namespace

void SearchCriteria::check() const {
    if (max_results <= 0) throw InputError("max_results must be positive");
    if (max_results > kSearchCap)
        throw InputError("max_results exceeds the API search cap of " +
                         std::to_string(kSearchCap));
    if (min_stars < 0) throw InputError("min_stars must be nonnegative");
}

std::optional<Timestamp> parse_iso8601_utc(std::string_view text) {
    std::tm tm{};
    int y, mo, d, h, mi, s;
    if (std::sscanf(std::string(text).c_str(), "%d-%d-%dT%d:%d:%dZ", &y, &mo, &d, &h, &mi, &s) != 6)
        return std::nullopt;
    tm.tm_year = y - 1900;
    tm.tm_mon = mo - 1;
    tm.tm_mday = d;
    tm.tm_hour = h;
    tm.tm_min = mi;
    tm.tm_sec = s;
    const time_t t = timegm(&tm);
    if (t == static_cast<time_t>(-1)) return std::nullopt;
    return static_cast<Timestamp>(t) * 1000000;
}

std::string Client::get(const std::string& path) const {
    Response r = get_with_retries(opts_, path);
    if (r.status != 200)
        throw NetworkError("GET " + path + " returned " + std::to_string(r.status), r.status);
    return r.body;
}

std::vector<RepoMetadata> Client::list_repositories(const SearchCriteria& criteria) const {
    criteria.check();

    std::string q = criteria.query;
    if (criteria.min_stars > 0) q += " stars:>=" + std::to_string(criteria.min_stars);
    if (criteria.language) q += " language:" + *criteria.language;

    std::vector<RepoMetadata> found;
    std::vector<std::string> seen;
    for (int page = 1; static_cast<int>(found.size()) < criteria.max_results; ++page) {
        const std::string path = "/search/repositories?q=" + url_encode(q) +
                                 "&sort=stars&order=desc&per_page=" + std::to_string(kPerPage) +
                                 "&page=" + std::to_string(page);
        const std::string body = get(path);
        json j = json::parse(body, nullptr, false);
        if (j.is_discarded() || !j.contains("items") || !j["items"].is_array())
            throw FormatError("malformed search response for " + path);

        const auto& items = j["items"];
        if (items.empty()) break;
        for (const auto& item : items) {
            RepoMetadata m;
            try {
                m = metadata_from(item);
            } catch (const json::exception& e) {
                throw FormatError(std::string("malformed search item: ") + e.what());
            }
            if (m.stargazers_count < criteria.min_stars) continue;
            if (criteria.language && (!m.language || !iequals(*m.language, *criteria.language)))
                continue;
            if (std::find(seen.begin(), seen.end(), m.full_name) != seen.end()) continue;
            seen.push_back(m.full_name);
            found.push_back(std::move(m));
            if (static_cast<int>(found.size()) >= criteria.max_results) break;
        }
        if (static_cast<int>(items.size()) < kPerPage) break;
    }

    std::stable_sort(found.begin(), found.end(), [](const RepoMetadata& a, const RepoMetadata& b) {
        if (a.stargazers_count != b.stargazers_count) return a.stargazers_count > b.stargazers_count;
        return a.full_name < b.full_name;
    });
    return found;
}

std::string Client::fetch_repo_json(const std::string& full_name) const {
    Response r = get_with_retries(opts_, "/repos/" + full_name);
    if (r.status == 404)
        throw NetworkError("repository " + full_name + " not found (404)", 404);
    if (r.status != 200)
        throw NetworkError("GET /repos/" + full_name + " returned " + std::to_string(r.status),
                           r.status);
    return r.body;
}

std::string format_iso8601_utc(Timestamp t) {
    const time_t secs = static_cast<time_t>(t / 1000000);
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

std::string to_json(const RepoMetadata& meta) {
    nlohmann::ordered_json j{{"full_name", meta.full_name},
                             {"html_url", meta.html_url},
                             {"stargazers_count", meta.stargazers_count},
                             {"fork", meta.fork},
                             {"default_branch", meta.default_branch},
                             {"language", meta.language ? nlohmann::ordered_json(*meta.language)
                                                        : nlohmann::ordered_json(nullptr)},
                             {"created_at", format_iso8601_utc(meta.created_at)}};
    return j.dump();
}

RepoMetadata repo_metadata_from_json(std::string_view body) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) throw FormatError("malformed repository metadata JSON");
    try {
        return metadata_from(j);
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed repository metadata: ") + e.what());
    }
}

FetchOutcome fetch_repo_metadata(const std::vector<std::string>& full_names,
                                 const fs::path& out_dir, const Client& client, bool force) {
    fs::create_directories(out_dir);
    FetchOutcome outcome;
    for (const auto& name : full_names) {
        auto slash = name.find('/');
        if (slash == std::string::npos || slash == 0 || slash + 1 >= name.size()) {
            outcome.failed.emplace_back(name, "not an owner/name pair");
            continue;
        }
        const fs::path file =
            out_dir / (name.substr(0, slash) + "__" + name.substr(slash + 1) + ".json");
        if (!force && fs::exists(file)) {
            outcome.skipped.push_back(file);
            continue;
        }
        std::string body;
        try {
            body = client.fetch_repo_json(name);
        } catch (const RateLimitError&) {
            throw; // abort: every further call would fail the same way
        } catch (const Error& e) {
            outcome.failed.emplace_back(name, e.what());
            continue;
        }
        std::ofstream out(file, std::ios::binary | std::ios::trunc);
        if (!out) {
            outcome.failed.emplace_back(name, "cannot write " + file.string());
            continue;
        }
        out.write(body.data(), static_cast<std::streamsize>(body.size()));
        outcome.written.push_back(file);
    }
    return outcome;
}

} // namespace miner::github
