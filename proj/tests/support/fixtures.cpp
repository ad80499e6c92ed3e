#include "fixtures.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <fstream>
#include <stdexcept>

#include "miner/dataset.hpp"
#include "miner/java_parser.hpp"
#include "miner/process.hpp"
#include "miner/sha256.hpp"

using namespace miner;

namespace minertest {

TempDir::TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    const int id = counter.fetch_add(1);
    path_ = fs::temp_directory_path() /
            (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(id));
    fs::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

GitRepoBuilder::GitRepoBuilder(fs::path where, const std::string& branch)
    : path_(std::move(where)) {
    fs::create_directories(path_);
    git({"init", "-q", "-b", branch});
}

std::string GitRepoBuilder::git(const std::vector<std::string>& args,
                                std::int64_t when) const {
    std::vector<std::string> argv{"git", "-c", "user.name=Fixture",
                                  "-c", "user.email=fixture@example.com"};
    for (const auto& a : args) argv.push_back(a);
    CommandOptions opts;
    opts.cwd = path_;
    opts.env["GIT_TERMINAL_PROMPT"] = "0";
    if (when != 0) {
        const std::string stamp = std::to_string(when) + " +0000";
        opts.env["GIT_AUTHOR_DATE"] = stamp;
        opts.env["GIT_COMMITTER_DATE"] = stamp;
    }
    auto r = run_command(argv, opts);
    if (!r.ok())
        throw std::runtime_error("fixture git failed: " + argv[5] + ": " + r.err);
    std::string out = r.out;
    while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
    return out;
}

void GitRepoBuilder::write(const std::string& rel_path, const std::string& content) {
    const fs::path p = path_ / rel_path;
    fs::create_directories(p.parent_path());
    std::string normalized = content;
    {
        std::ofstream f(p, std::ios::binary | std::ios::trunc);
        f.write(normalized.data(), static_cast<std::streamsize>(normalized.size()));
    }
    git({"add", rel_path});
}

void GitRepoBuilder::remove(const std::string& rel_path) { git({"rm", "-q", rel_path}); }

std::string GitRepoBuilder::commit(const std::string& message, std::int64_t unix_seconds,
                                   bool allow_empty) {
    std::vector<std::string> args{"commit", "-q", "-m", message};
    if (allow_empty) args.push_back("--allow-empty");
    git(args, unix_seconds);
    return head();
}

std::string GitRepoBuilder::checkout_new_branch(const std::string& name,
                                                const std::string& from) {
    if (from.empty()) git({"checkout", "-q", "-b", name});
    else git({"checkout", "-q", "-b", name, from});
    return head();
}

void GitRepoBuilder::checkout(const std::string& name) { git({"checkout", "-q", name}); }

std::string GitRepoBuilder::merge(const std::string& branch, const std::string& message,
                                  std::int64_t unix_seconds) {
    git({"merge", "-q", "--no-ff", "-m", message, branch}, unix_seconds);
    return head();
}

std::string GitRepoBuilder::head() const { return git({"rev-parse", "HEAD"}); }

FixtureRepos make_fixture_repos(const fs::path& root) {
    fs::create_directories(root);
    FixtureRepos fx;
    fx.root = root;

    // alpha/util: class-level annotation removed before head.
    {
        GitRepoBuilder repo(root / "alpha__util");
        repo.write("Util.java",
                   "package alpha;\n"
                   "\n"
                   "@Deprecated\n"
                   "public class Util {\n"
                   "    @Override\n"
                   "    public String toString() { return \"util\"; }\n"
                   "}\n");
        repo.write("Notes.txt", "not java\n");
        repo.commit("add util", 1577836800); // 2020-01-01
        repo.write("Util.java",
                   "package alpha;\n"
                   "\n"
                   "public class Util {\n"
                   "    @Override\n"
                   "    public String toString() { return \"util v2\"; }\n"
                   "}\n");
        repo.write("Extra.java",
                   "package alpha;\n"
                   "\n"
                   "public class Extra {\n"
                   "    @SuppressWarnings(\"unchecked\")\n"
                   "    void helper(int n) { if (n > 0) helper(n - 1); }\n"
                   "}\n");
        repo.commit("drop deprecated marker", 1577923200); // 2020-01-02
        fx.worktrees.push_back(repo.path());
    }

    // beta/core: a merge commit brings in one more annotated file.
    {
        GitRepoBuilder repo(root / "beta__core");
        repo.write("Core.java",
                   "package beta;\n"
                   "\n"
                   "import java.util.List;\n"
                   "\n"
                   "public class Core {\n"
                   "    @Deprecated static int OLD = 1;\n"
                   "\n"
                   "    @Override\n"
                   "    public int hashCode() { return OLD; }\n"
                   "\n"
                   "    @SafeVarargs\n"
                   "    final void all(List<String>... xs) { return; }\n"
                   "}\n");
        repo.commit("core", 1580515200); // 2020-02-01
        repo.checkout_new_branch("side");
        repo.write("Side.java",
                   "package beta;\n"
                   "\n"
                   "class Side {\n"
                   "    @Override\n"
                   "    public String toString() { return \"side\"; }\n"
                   "}\n");
        repo.commit("side work", 1580601600); // 2020-02-02
        repo.checkout("main");
        repo.write("README.md", "# beta core\n");
        repo.commit("readme", 1580688000); // 2020-02-03
        repo.merge("side", "merge side", 1580774400); // 2020-02-04
        fx.worktrees.push_back(repo.path());
    }

    // gamma/app: annotations only arrive at head; exercises nested types.
    {
        GitRepoBuilder repo(root / "gamma__app");
        repo.write("App.java",
                   "package gamma;\n"
                   "\n"
                   "public class App {\n"
                   "    public static void main(String[] args) {\n"
                   "        System.out.println(\"hi @NotAnAnnotation\");\n"
                   "        // @AlsoNotAnAnnotation in a comment\n"
                   "    }\n"
                   "}\n");
        repo.commit("app skeleton", 1583020800); // 2020-03-01
        repo.write("App.java",
                   "package gamma;\n"
                   "\n"
                   "public class App {\n"
                   "    interface Runner { void run(); }\n"
                   "\n"
                   "    static class Impl implements Runner {\n"
                   "        @Override\n"
                   "        public void run() {}\n"
                   "    }\n"
                   "\n"
                   "    @FunctionalInterface\n"
                   "    interface Op { int apply(int x); }\n"
                   "\n"
                   "    public static void main(String[] args) { new Impl().run(); }\n"
                   "}\n");
        repo.commit("runners", 1583107200); // 2020-03-02
        fx.worktrees.push_back(repo.path());
    }

    fx.dir_names = {"alpha__util", "beta__core", "gamma__app"};
    fx.expected_annotations = {{"alpha/util", 2}, {"beta/core", 4}, {"gamma/app", 2}};
    return fx;
}

Project make_project(const std::string& id,
                     const std::vector<std::pair<std::string, std::string>>& sources,
                     std::map<std::string, AstRoot>& ast_store, std::int64_t commit_seconds) {
    Project p;
    p.id = id;
    auto slash = id.find('/');
    p.name = slash == std::string::npos ? id : id.substr(slash + 1);
    p.url = "https://example.invalid/" + id;

    Revision rev;
    rev.id = sha256_hex("rev:" + id + ":" + std::to_string(commit_seconds)).substr(0, 40);
    rev.author = "Fixture <fixture@example.com>";
    rev.committer = rev.author;
    rev.commit_time = commit_seconds * 1000000;
    rev.log = "fixture";
    for (const auto& [path, content] : sources) {
        ChangedFile f;
        f.path = path;
        f.change_kind = ChangeKind::ADDED;
        const bool java = path.size() > 5 && path.ends_with(".java");
        f.file_kind = java ? FileKind::SOURCE_JAVA : FileKind::OTHER;
        f.blob_hash = sha256_hex(content);
        if (java) {
            auto parsed = java::parse_source(content, FileKind::SOURCE_JAVA);
            if (parsed.ok()) ast_store.emplace(f.blob_hash, std::move(*parsed.ast));
            else f.parse_error = true;
        }
        rev.files.push_back(std::move(f));
    }
    std::sort(rev.files.begin(), rev.files.end(),
              [](const ChangedFile& a, const ChangedFile& b) { return a.path < b.path; });

    p.repository.url = p.url;
    p.repository.revisions.push_back(std::move(rev));
    p.repository.head_index = 0;
    return p;
}

void write_synthetic_dataset(const fs::path& dir, int projects, int methods,
                             int annotations_per_method, const std::string& name) {
    std::vector<Project> ps;
    std::map<std::string, AstRoot> asts;
    for (int i = 0; i < projects; ++i) {
        std::string source = "package synth;\n\npublic class C" + std::to_string(i) + " {\n";
        for (int m = 0; m < methods; ++m) {
            for (int a = 0; a < annotations_per_method; ++a)
                source += "    @Marker" + std::to_string(a) + "\n";
            source += "    public int m" + std::to_string(m) + "(int x) {\n";
            source += "        if (x > 0) { return x - 1; }\n";
            source += "        for (int j = 0; j < x; j = j + 1) { use(j, \"lit\"); }\n";
            source += "        return 0;\n    }\n";
        }
        source += "}\n";
        char id[32];
        std::snprintf(id, sizeof id, "synth/p%05d", i);
        ps.push_back(make_project(id, {{"C" + std::to_string(i) + ".java", source}}, asts));
    }
    write_dataset(ps, asts, dir, name);
}

} // namespace minertest
