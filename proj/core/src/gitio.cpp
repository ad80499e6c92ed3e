#include "miner/gitio.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "miner/errors.hpp"
#include "miner/process.hpp"
#include "miner/sha256.hpp"

namespace fs = std::filesystem;

namespace miner {

namespace {

// Every git invocation must fail rather than prompt.
CommandOptions git_options(const fs::path& cwd) {
    CommandOptions opts;
    opts.cwd = cwd;
    opts.env["GIT_TERMINAL_PROMPT"] = "0";
    opts.env["GIT_ASKPASS"] = "/bin/true";
    return opts;
}

CommandResult git(const fs::path& repo, std::vector<std::string> args) {
    std::vector<std::string> argv{"git"};
    for (auto& a : args) argv.push_back(std::move(a));
    return run_command(argv, git_options(repo));
}

std::string first_line(const std::string& s) {
    auto nl = s.find('\n');
    return nl == std::string::npos ? s : s.substr(0, nl);
}

bool looks_like_full_name(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 >= s.size()) return false;
    if (s.find('/', slash + 1) != std::string::npos) return false;
    if (s.find(':') != std::string::npos) return false;
    return true;
}

std::string sanitize_dir_component(std::string s) {
    for (char& c : s)
        if (c == '/' || c == '\\' || c == ':') c = '_';
    return s;
}

bool is_file_kind_java(const std::string& path) {
    // ".java", case-insensitive
    if (path.size() < 5) return false;
    const std::string_view tail(path.data() + path.size() - 5, 5);
    const char* want = ".java";
    for (std::size_t i = 0; i < 5; ++i)
        if (std::tolower(static_cast<unsigned char>(tail[i])) != want[i]) return false;
    return true;
}

struct RawCommit {
    std::string id;
    std::vector<std::string> parents;
    std::string author;
    std::string committer;
    Timestamp commit_time = 0;
    std::string log;
};

std::vector<RawCommit> read_commits(const fs::path& repo) {
    auto r = git(repo, {"log", "-z", "--format=%H%x00%P%x00%an <%ae>%x00%cn <%ce>%x00%ct%x00%B",
                        "HEAD"});
    if (!r.ok()) throw InputError("git log failed in " + repo.string() + ": " + first_line(r.err));

    std::vector<RawCommit> commits;
    std::size_t pos = 0;
    auto next_field = [&](std::string& out) -> bool {
        if (pos >= r.out.size()) return false;
        auto nul = r.out.find('\0', pos);
        if (nul == std::string::npos) nul = r.out.size();
        out.assign(r.out, pos, nul - pos);
        pos = nul + 1;
        return true;
    };
    while (pos < r.out.size()) {
        RawCommit c;
        std::string parents, ct;
        if (!next_field(c.id) || c.id.empty()) break;
        next_field(parents);
        next_field(c.author);
        next_field(c.committer);
        next_field(ct);
        next_field(c.log);
        std::size_t p = 0;
        while (p < parents.size()) {
            auto space = parents.find(' ', p);
            if (space == std::string::npos) space = parents.size();
            if (space > p) c.parents.push_back(parents.substr(p, space - p));
            p = space + 1;
        }
        c.commit_time = static_cast<Timestamp>(std::strtoll(ct.c_str(), nullptr, 10)) * 1000000;
        commits.push_back(std::move(c));
    }
    return commits;
}

struct RawChange {
    std::string path;
    char status = 'A';
    std::string git_blob; // post-change blob id; all-zero for deletions
};

bool is_commit_id(const std::string& s) {
    if (s.size() != 40 && s.size() != 64) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); });
}

// One diff-tree pass for every commit: "C P1" lines (bare "C" for roots).
std::map<std::string, std::vector<RawChange>> read_changes(const fs::path& repo,
                                                           const std::vector<RawCommit>& commits) {
    std::string stdin_data;
    for (const auto& c : commits) {
        stdin_data += c.id;
        if (!c.parents.empty()) {
            stdin_data += ' ';
            stdin_data += c.parents[0];
        }
        stdin_data += '\n';
    }

    CommandOptions opts = git_options(repo);
    opts.stdin_data = std::move(stdin_data);
    auto r = run_command({"git", "diff-tree", "--stdin", "-r", "--root", "--no-renames", "-z"},
                         opts);
    if (!r.ok())
        throw InputError("git diff-tree failed in " + repo.string() + ": " + first_line(r.err));

    std::map<std::string, std::vector<RawChange>> changes;
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= r.out.size() && pos < r.out.size()) {
        auto nul = r.out.find('\0', pos);
        if (nul == std::string::npos) nul = r.out.size();
        parts.emplace_back(r.out, pos, nul - pos);
        pos = nul + 1;
    }

    std::string current;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const std::string& part = parts[i];
        if (part.empty()) continue;
        if (part[0] == ':') {
            // ":oldmode newmode oldsha newsha status" followed by the path part
            if (i + 1 >= parts.size()) break;
            RawChange ch;
            ch.path = parts[++i];
            std::vector<std::string> cols;
            std::size_t p = 1;
            while (p <= part.size()) {
                auto sp = part.find(' ', p);
                if (sp == std::string::npos) sp = part.size();
                cols.emplace_back(part, p, sp - p);
                p = sp + 1;
            }
            if (cols.size() < 5 || current.empty()) continue;
            ch.git_blob = cols[3];
            ch.status = cols[4][0];
            changes[current].push_back(std::move(ch));
        } else if (is_commit_id(part)) {
            current = part;
        }
    }
    return changes;
}

constexpr const char* kZeroId40 = "0000000000000000000000000000000000000000";

} // namespace

CloneSource resolve_clone_source(const std::string& line) {
    CloneSource src;
    if (looks_like_full_name(line)) {
        src.display = line;
        src.url = "https://github.com/" + line + ".git";
        auto slash = line.find('/');
        src.dir_name = sanitize_dir_component(line.substr(0, slash)) + "__" +
                       sanitize_dir_component(line.substr(slash + 1));
        return src;
    }
    src.display = line;
    src.url = line;
    std::string tail = line;
    while (!tail.empty() && tail.back() == '/') tail.pop_back();
    if (tail.size() >= 4 && tail.ends_with(".git")) tail.resize(tail.size() - 4);
    auto slash = tail.find_last_of('/');
    std::string name = slash == std::string::npos ? tail : tail.substr(slash + 1);

    const bool is_url = line.find("://") != std::string::npos || line.find('@') != std::string::npos;
    std::string owner;
    if (is_url && slash != std::string::npos && slash > 0) {
        auto prev = tail.find_last_of('/', slash - 1);
        owner = tail.substr(prev == std::string::npos ? 0 : prev + 1,
                            slash - (prev == std::string::npos ? 0 : prev + 1));
        if (owner.find(':') != std::string::npos || owner.empty() || owner == "." || owner == "..")
            owner.clear();
    }
    // Plain local paths keep their basename; a basename that already looks
    // like owner__name is used as is.
    src.dir_name = owner.empty() ? sanitize_dir_component(name)
                                 : sanitize_dir_component(owner) + "__" + sanitize_dir_component(name);
    if (!owner.empty()) src.display = owner + "/" + name;
    return src;
}

CloneReport clone_repositories(const std::vector<CloneSource>& sources, const fs::path& dest,
                               int jobs) {
    fs::create_directories(dest);
    CloneReport report;
    report.requested = static_cast<int>(sources.size());

    struct Slot {
        bool ok = false;
        std::string reason;
    };
    std::vector<Slot> slots(sources.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= sources.size()) return;
            const auto& src = sources[i];
            const fs::path target = dest / src.dir_name;
            if (fs::exists(target)) {
                slots[i].ok = true; // counted as succeeded, no network
                continue;
            }
            auto r = run_command({"git", "clone", "--quiet", "--bare", src.url, target.string()},
                                 git_options(""));
            if (r.ok()) {
                slots[i].ok = true;
            } else {
                slots[i].reason = first_line(r.err);
                if (slots[i].reason.empty())
                    slots[i].reason = "git clone exited with " + std::to_string(r.exit_code);
                std::error_code ec;
                fs::remove_all(target, ec); // drop partial clones
            }
        }
    };

    const int n = std::max(1, std::min<int>(jobs, static_cast<int>(sources.size())));
    std::vector<std::thread> threads;
    for (int t = 0; t < n; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();

    for (std::size_t i = 0; i < sources.size(); ++i) {
        if (slots[i].ok) report.succeeded.push_back(sources[i].display);
        else report.failed.emplace_back(sources[i].display, slots[i].reason);
    }
    return report;
}

CodeRepository extract_history(const fs::path& repo_path, const BlobSink& on_blob) {
    auto probe = git(repo_path, {"rev-parse", "--git-dir"});
    if (!probe.ok()) throw InputError(repo_path.string() + " is not a git repository");

    CodeRepository repo;
    auto origin = git(repo_path, {"config", "--get", "remote.origin.url"});
    repo.url = origin.ok() ? first_line(origin.out) : repo_path.string();

    auto head = git(repo_path, {"rev-parse", "HEAD"});
    if (!head.ok()) return repo; // no commits yet

    const std::string head_id = first_line(head.out);
    auto commits = read_commits(repo_path);
    auto changes = read_changes(repo_path, commits);

    std::sort(commits.begin(), commits.end(), [](const RawCommit& a, const RawCommit& b) {
        return std::pair(a.commit_time, a.id) < std::pair(b.commit_time, b.id);
    });

    // Resolve each referenced git blob to a sha256 exactly once. A blob is
    // java-kind if any path referencing it is java.
    std::map<std::string, FileKind> wanted;
    for (const auto& [id, chs] : changes)
        for (const auto& ch : chs) {
            if (ch.status == 'D' || ch.git_blob == kZeroId40 || ch.git_blob.empty()) continue;
            auto [it, inserted] = wanted.emplace(ch.git_blob, FileKind::OTHER);
            if (is_file_kind_java(ch.path)) it->second = FileKind::SOURCE_JAVA;
        }

    std::map<std::string, std::string> blob_sha256; // git id -> sha256 ("" = unreadable)
    if (!wanted.empty()) {
        PipeProcess cat({"git", "cat-file", "--batch"}, git_options(repo_path));
        for (const auto& [id, kind] : wanted) {
            cat.write(id + "\n");
            std::string header;
            if (!cat.read_line(header)) throw InputError("git cat-file terminated early");
            // "<id> blob <size>" or "<id> missing"
            if (header.ends_with(" missing") || header.find(" blob ") == std::string::npos) {
                blob_sha256[id] = "";
                continue;
            }
            const auto size = std::strtoull(header.c_str() + header.rfind(' ') + 1, nullptr, 10);
            std::string bytes = cat.read_exact(size);
            cat.read_exact(1); // trailing newline
            std::string digest = sha256_hex(bytes);
            blob_sha256[id] = digest;
            if (on_blob) on_blob(digest, kind, bytes);
        }
        cat.close_stdin();
    }

    repo.revisions.reserve(commits.size());
    for (auto& c : commits) {
        Revision rev;
        rev.id = c.id;
        rev.author = std::move(c.author);
        rev.committer = std::move(c.committer);
        rev.commit_time = c.commit_time;
        rev.log = std::move(c.log);

        auto it = changes.find(c.id);
        if (it != changes.end()) {
            for (const auto& ch : it->second) {
                ChangedFile f;
                f.path = ch.path;
                switch (ch.status) {
                case 'A': f.change_kind = ChangeKind::ADDED; break;
                case 'D': f.change_kind = ChangeKind::DELETED; break;
                default: f.change_kind = ChangeKind::MODIFIED; break; // M, T
                }
                f.file_kind = is_file_kind_java(f.path) ? FileKind::SOURCE_JAVA : FileKind::OTHER;
                if (f.change_kind != ChangeKind::DELETED) {
                    auto found = blob_sha256.find(ch.git_blob);
                    if (found == blob_sha256.end() || found->second.empty()) {
                        f.parse_error = true; // unreadable object
                        f.blob_hash.clear();
                    } else {
                        f.blob_hash = found->second;
                    }
                }
                rev.files.push_back(std::move(f));
            }
            std::sort(rev.files.begin(), rev.files.end(),
                      [](const ChangedFile& a, const ChangedFile& b) { return a.path < b.path; });
        }
        repo.revisions.push_back(std::move(rev));
    }

    for (std::size_t i = 0; i < repo.revisions.size(); ++i)
        if (repo.revisions[i].id == head_id) {
            repo.head_index = i;
            break;
        }
    return repo;
}

} // namespace miner
