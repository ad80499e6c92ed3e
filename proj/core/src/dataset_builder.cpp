#include "miner/dataset_builder.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "miner/dataset.hpp"
#include "miner/errors.hpp"
#include "miner/github.hpp"
#include "miner/gitio.hpp"
#include "miner/java_parser.hpp"

namespace fs = std::filesystem;

namespace miner {

namespace {

std::string project_id_from_dir(const std::string& dir_name) {
    auto sep = dir_name.find("__");
    if (sep == std::string::npos || sep == 0 || sep + 2 >= dir_name.size()) return dir_name;
    return dir_name.substr(0, sep) + "/" + dir_name.substr(sep + 2);
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void join_metadata(Project& project, const fs::path& metadata_dir, const std::string& dir_name) {
    const fs::path file = metadata_dir / (dir_name + ".json");
    if (!fs::exists(file)) return;
    github::RepoMetadata meta;
    try {
        meta = github::repo_metadata_from_json(read_file(file));
    } catch (const Error&) {
        return; // defaults stand
    }
    project.stars = meta.stargazers_count;
    project.created = meta.created_at;
    if (!meta.html_url.empty()) project.url = meta.html_url;
    project.metadata.emplace_back("default_branch", meta.default_branch);
    project.metadata.emplace_back("fork", meta.fork ? "true" : "false");
    if (meta.language) project.metadata.emplace_back("language", *meta.language);
}

} // namespace

BuildReport build_dataset(const BuildOptions& options) {
    if (options.jobs < 1) throw InputError("jobs must be >= 1");

    std::vector<std::string> repo_dirs;
    if (fs::exists(options.clones_root)) {
        for (const auto& entry : fs::directory_iterator(options.clones_root))
            if (entry.is_directory()) repo_dirs.push_back(entry.path().filename().string());
    }
    std::sort(repo_dirs.begin(), repo_dirs.end());

    BuildReport report;

    struct Slot {
        std::optional<Project> project;
        std::string error;
    };
    std::vector<Slot> slots(repo_dirs.size());

    // Distinct java blobs across the whole corpus, keyed by content hash.
    std::map<std::string, std::string> java_blobs;
    std::mutex blobs_mutex;
    std::mutex progress_mutex;
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};

    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= repo_dirs.size()) return;
            const std::string& dir_name = repo_dirs[i];
            try {
                CodeRepository repo = extract_history(
                    options.clones_root / dir_name,
                    [&](const std::string& sha256, FileKind kind, const std::string& bytes) {
                        if (kind != FileKind::SOURCE_JAVA) return;
                        std::lock_guard lock(blobs_mutex);
                        java_blobs.emplace(sha256, bytes);
                    });
                Project p;
                p.id = project_id_from_dir(dir_name);
                auto slash = p.id.find('/');
                p.name = slash == std::string::npos ? p.id : p.id.substr(slash + 1);
                p.url = repo.url;
                p.repository = std::move(repo);
                if (options.metadata_dir) join_metadata(p, *options.metadata_dir, dir_name);
                slots[i].project = std::move(p);
            } catch (const Error& e) {
                slots[i].error = e.what();
            }
            const std::size_t d = done.fetch_add(1) + 1;
            if (options.progress) {
                std::lock_guard lock(progress_mutex);
                options.progress(d, repo_dirs.size());
            }
        }
    };

    {
        const int n = std::max(1, std::min<int>(options.jobs, (int)std::max<std::size_t>(repo_dirs.size(), 1)));
        std::vector<std::thread> threads;
        for (int t = 0; t < n; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    // Parse every distinct java blob exactly once, in deterministic order.
    std::vector<const std::pair<const std::string, std::string>*> blob_list;
    blob_list.reserve(java_blobs.size());
    for (const auto& kv : java_blobs) blob_list.push_back(&kv);

    std::map<std::string, AstRoot> asts;
    std::set<std::string> failed_blobs;
    std::mutex results_mutex;
    std::atomic<std::size_t> next_blob{0};
    auto parse_worker = [&] {
        while (true) {
            const std::size_t i = next_blob.fetch_add(1);
            if (i >= blob_list.size()) return;
            const auto& [hash, bytes] = *blob_list[i];
            auto result = java::parse_source(bytes, FileKind::SOURCE_JAVA);
            std::lock_guard lock(results_mutex);
            if (result.ok()) asts.emplace(hash, std::move(*result.ast));
            else failed_blobs.insert(hash);
        }
    };
    {
        const int n = std::max(1, std::min<int>(options.jobs, (int)std::max<std::size_t>(blob_list.size(), 1)));
        std::vector<std::thread> threads;
        for (int t = 0; t < n; ++t) threads.emplace_back(parse_worker);
        for (auto& t : threads) t.join();
    }

    std::vector<Project> projects;
    Timestamp newest = 0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (!slots[i].project) {
            report.skipped.emplace_back(repo_dirs[i], slots[i].error);
            continue;
        }
        Project& p = *slots[i].project;
        for (auto& rev : p.repository.revisions) {
            newest = std::max(newest, rev.commit_time);
            ++report.revisions;
            for (auto& f : rev.files)
                if (f.file_kind == FileKind::SOURCE_JAVA && !f.blob_hash.empty() &&
                    failed_blobs.count(f.blob_hash))
                    f.parse_error = true; // hash kept; no AST stored for it
        }
        projects.push_back(std::move(p));
    }

    report.repositories = static_cast<std::int64_t>(projects.size());
    report.distinct_asts = static_cast<std::int64_t>(asts.size());
    report.parse_failures = static_cast<std::int64_t>(failed_blobs.size());
    report.manifest = write_dataset(projects, asts, options.out_dir, options.name, newest);
    return report;
}

} // namespace miner
