#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "miner/errors.hpp"
#include "miner/gitio.hpp"
#include "miner/process.hpp"
#include "miner/sha256.hpp"

using namespace miner;
using minertest::GitRepoBuilder;
using minertest::TempDir;

namespace {

// Independent listing: what git itself says changed in a commit vs its
// first parent.
std::set<std::pair<std::string, char>> git_name_status(const std::filesystem::path& repo,
                                                       const std::string& commit) {
    CommandOptions opts;
    opts.cwd = repo;
    auto parents = run_command({"git", "rev-list", "--parents", "-n", "1", commit}, opts);
    REQUIRE(parents.ok());
    std::istringstream ids(parents.out);
    std::string self, first_parent;
    ids >> self >> first_parent;

    CommandResult r;
    if (first_parent.empty())
        r = run_command(
            {"git", "diff-tree", "-r", "--root", "--name-status", "--no-renames", commit}, opts);
    else
        r = run_command(
            {"git", "diff-tree", "-r", "--name-status", "--no-renames", first_parent, commit},
            opts);
    REQUIRE(r.ok());
    std::set<std::pair<std::string, char>> out;
    std::istringstream lines(r.out);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty() || line[0] == ':') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) continue; // echoed commit id
        out.insert({line.substr(tab + 1), line[0]});
    }
    return out;
}

char kind_letter(ChangeKind k) {
    switch (k) {
    case ChangeKind::ADDED: return 'A';
    case ChangeKind::MODIFIED: return 'M';
    case ChangeKind::DELETED: return 'D';
    }
    return '?';
}

} // namespace

TEST_CASE("not a git repository raises InputError") {
    TempDir tmp;
    std::filesystem::create_directories(tmp / "plain");
    CHECK_THROWS_AS(extract_history(tmp / "plain"), InputError);
}

TEST_CASE("repository without commits extracts empty") {
    TempDir tmp;
    GitRepoBuilder repo(tmp / "fresh");
    CodeRepository r = extract_history(repo.path());
    CHECK(r.revisions.empty());
    CHECK(!r.head_index.has_value());
}

TEST_CASE("single empty commit yields one revision with no files") {
    TempDir tmp;
    GitRepoBuilder repo(tmp / "empty");
    repo.commit("nothing", 1600000000, /*allow_empty=*/true);
    CodeRepository r = extract_history(repo.path());
    REQUIRE(r.revisions.size() == 1);
    CHECK(r.revisions[0].files.empty());
    CHECK(r.revisions[0].commit_time == 1600000000LL * 1000000);
    CHECK(r.head_index == 0);
}

TEST_CASE("two-commit history: adds, modify, delete, kinds and hashes") {
    TempDir tmp;
    GitRepoBuilder repo(tmp / "two");
    repo.write("A.java", "class A {}\n");
    repo.write("B.txt", "notes\n");
    const std::string c1 = repo.commit("c1", 1600000000);
    repo.write("A.java", "class A { int x; }\n");
    repo.remove("B.txt");
    const std::string c2 = repo.commit("c2", 1600000100);

    CodeRepository r = extract_history(repo.path());
    REQUIRE(r.revisions.size() == 2);
    CHECK(r.revisions[0].id == c1);
    CHECK(r.revisions[1].id == c2);
    CHECK(r.head_index == 1);

    const auto& f1 = r.revisions[0].files;
    REQUIRE(f1.size() == 2);
    CHECK(f1[0].path == "A.java");
    CHECK(f1[0].change_kind == ChangeKind::ADDED);
    CHECK(f1[0].file_kind == FileKind::SOURCE_JAVA);
    CHECK(f1[0].blob_hash == sha256_hex("class A {}\n"));
    CHECK(f1[1].path == "B.txt");
    CHECK(f1[1].file_kind == FileKind::OTHER);
    CHECK(f1[1].blob_hash == sha256_hex("notes\n"));

    const auto& f2 = r.revisions[1].files;
    REQUIRE(f2.size() == 2);
    CHECK(f2[0].path == "A.java");
    CHECK(f2[0].change_kind == ChangeKind::MODIFIED);
    CHECK(f2[0].blob_hash == sha256_hex("class A { int x; }\n"));
    CHECK(f2[1].path == "B.txt");
    CHECK(f2[1].change_kind == ChangeKind::DELETED);
    CHECK(f2[1].blob_hash.empty());

    // cross-check every revision against git's own name-status listing
    for (const auto& rev : r.revisions) {
        std::set<std::pair<std::string, char>> mine;
        for (const auto& f : rev.files) mine.insert({f.path, kind_letter(f.change_kind)});
        CHECK(mine == git_name_status(repo.path(), rev.id));
    }
}

TEST_CASE("merge commits diff against the first parent only") {
    TempDir tmp;
    GitRepoBuilder repo(tmp / "merge");
    repo.write("base.java", "class Base {}\n");
    repo.commit("base", 1600000000);
    repo.checkout_new_branch("feature");
    repo.write("feature.java", "class Feature {}\n");
    repo.commit("feature work", 1600000100);
    repo.checkout("main");
    repo.write("main.txt", "main lane\n");
    repo.commit("main work", 1600000200);
    const std::string merge_id = repo.merge("feature", "merge feature", 1600000300);

    CodeRepository r = extract_history(repo.path());
    REQUIRE(r.revisions.size() == 4);
    const auto merged = std::find_if(r.revisions.begin(), r.revisions.end(),
                                     [&](const Revision& rev) { return rev.id == merge_id; });
    REQUIRE(merged != r.revisions.end());
    // vs first parent (main): only the feature file arrives
    REQUIRE(merged->files.size() == 1);
    CHECK(merged->files[0].path == "feature.java");
    CHECK(merged->files[0].change_kind == ChangeKind::ADDED);

    std::set<std::pair<std::string, char>> mine;
    for (const auto& f : merged->files) mine.insert({f.path, kind_letter(f.change_kind)});
    CHECK(mine == git_name_status(repo.path(), merge_id));
}

TEST_CASE("revisions are ordered by (commit_time, id) with head_index on HEAD") {
    TempDir tmp;
    GitRepoBuilder repo(tmp / "order");
    repo.write("a.txt", "1");
    repo.commit("one", 1600000200); // later time first in history
    repo.write("a.txt", "2");
    repo.commit("two", 1600000100); // goes backwards (rebase-like)
    const std::string head = repo.head();

    CodeRepository r = extract_history(repo.path());
    REQUIRE(r.revisions.size() == 2);
    CHECK(r.revisions[0].commit_time <= r.revisions[1].commit_time);
    REQUIRE(r.head_index.has_value());
    CHECK(r.revisions[*r.head_index].id == head);
}

TEST_CASE("only commits reachable from the default branch head are extracted") {
    TempDir tmp;
    GitRepoBuilder repo(tmp / "reach");
    repo.write("a.txt", "1");
    repo.commit("one", 1600000000);
    repo.checkout_new_branch("side");
    repo.write("b.txt", "2");
    repo.commit("side only", 1600000100);
    repo.checkout("main");

    CodeRepository r = extract_history(repo.path());
    CHECK(r.revisions.size() == 1);
}

TEST_CASE("clone: empty source list") {
    TempDir tmp;
    CloneReport report = clone_repositories({}, tmp / "dest", 4);
    CHECK(report.requested == 0);
    CHECK(report.succeeded.empty());
    CHECK(report.failed.empty());
}

TEST_CASE("clone: local fixtures succeed, bad source fails, rest continue") {
    TempDir tmp;
    GitRepoBuilder a(tmp / "src" / "a");
    a.write("x.txt", "a");
    a.commit("a", 1600000000);
    GitRepoBuilder b(tmp / "src" / "b");
    b.write("y.txt", "b");
    b.commit("b", 1600000000);

    std::vector<CloneSource> sources{
        {"local/a", "file://" + (tmp / "src" / "a").string(), "local__a"},
        {"missing/gone", "file://" + (tmp / "src" / "gone").string(), "missing__gone"},
        {"local/b", "file://" + (tmp / "src" / "b").string(), "local__b"},
    };
    CloneReport report = clone_repositories(sources, tmp / "dest", 2);
    CHECK(report.requested == 3);
    REQUIRE(report.succeeded.size() == 2);
    REQUIRE(report.failed.size() == 1);
    CHECK(report.failed[0].first == "missing/gone");
    CHECK(!report.failed[0].second.empty());

    // bare clones with valid object stores
    for (const char* d : {"local__a", "local__b"}) {
        CommandOptions opts;
        opts.cwd = tmp / "dest" / d;
        CHECK(run_command({"git", "rev-parse", "HEAD"}, opts).ok());
    }

    // an existing directory counts as succeeded without cloning again
    CloneReport again = clone_repositories(sources, tmp / "dest", 2);
    CHECK(again.succeeded.size() == 2);
}

TEST_CASE("clone source resolution") {
    CloneSource gh = resolve_clone_source("octo/demo");
    CHECK(gh.url == "https://github.com/octo/demo.git");
    CHECK(gh.dir_name == "octo__demo");
    CHECK(gh.display == "octo/demo");

    CloneSource url = resolve_clone_source("https://example.com/owner/repo.git");
    CHECK(url.dir_name == "owner__repo");
    CHECK(url.url == "https://example.com/owner/repo.git");

    CloneSource path = resolve_clone_source("/tmp/fixtures/somerepo");
    CHECK(path.dir_name == "somerepo"); // local paths keep their basename
    CHECK(path.url == "/tmp/fixtures/somerepo");

    CloneSource named = resolve_clone_source("/tmp/clones/alpha__util");
    CHECK(named.dir_name == "alpha__util"); // owner__name basenames pass through
}
