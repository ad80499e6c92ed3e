#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "miner/dataset.hpp"
#include "miner/dataset_builder.hpp"
#include "miner/gitio.hpp"

using namespace miner;
using minertest::GitRepoBuilder;
using minertest::TempDir;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::filesystem::path& p, const std::string& text) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

BuildOptions options(const std::filesystem::path& src, const std::filesystem::path& out,
                     int jobs) {
    BuildOptions o;
    o.clones_root = src;
    o.out_dir = out;
    o.name = "test";
    o.jobs = jobs;
    return o;
}

} // namespace

TEST_CASE("empty clones root builds an empty dataset") {
    TempDir tmp;
    std::filesystem::create_directories(tmp / "clones");
    BuildReport report = build_dataset(options(tmp / "clones", tmp / "ds", 2));
    CHECK(report.manifest.project_count == 0);
    CHECK(validate_dataset(tmp / "ds").ok());
}

TEST_CASE("fixture repositories build a clean dataset") {
    TempDir tmp;
    auto fx = minertest::make_fixture_repos(tmp / "clones");
    BuildReport report = build_dataset(options(tmp / "clones", tmp / "ds", 2));
    CHECK(report.manifest.project_count == 3);
    CHECK(report.parse_failures == 0);
    CHECK(report.skipped.empty());
    CHECK(report.revisions >= 6);
    auto validation = validate_dataset(tmp / "ds");
    CHECK(validation.issues.empty());

    DatasetReader reader(tmp / "ds");
    REQUIRE(reader.project_count() == 3);
    CHECK(reader.load_project(0).id == "alpha/util");
    CHECK(reader.load_project(1).id == "beta/core");
    CHECK(reader.load_project(2).id == "gamma/app");
}

TEST_CASE("jobs=1 and jobs=8 produce byte-identical datasets") {
    TempDir tmp;
    minertest::make_fixture_repos(tmp / "clones");
    build_dataset(options(tmp / "clones", tmp / "d1", 1));
    build_dataset(options(tmp / "clones", tmp / "d8", 8));
    for (const char* f : {"manifest.json", "projects.jsonl", "asts.jsonl"})
        CHECK(slurp(tmp / "d1" / f) == slurp(tmp / "d8" / f));
}

TEST_CASE("identical blobs across repositories are parsed and stored once") {
    TempDir tmp;
    const std::string same = "public class Same { @Override public int hashCode() { return 1; } }\n";
    GitRepoBuilder a(tmp / "clones" / "one__a");
    a.write("Same.java", same);
    a.write("Only.java", "class Only {}\n");
    a.commit("a", 1600000000);
    GitRepoBuilder b(tmp / "clones" / "two__b");
    b.write("Same.java", same);
    b.commit("b", 1600000010);

    BuildReport report = build_dataset(options(tmp / "clones", tmp / "ds", 2));
    CHECK(report.manifest.project_count == 2);
    // Same.java counted once, Only.java once
    CHECK(report.distinct_asts == 2);
    CHECK(report.manifest.ast_count == 2);
}

TEST_CASE("unreadable repository is skipped and recorded") {
    TempDir tmp;
    GitRepoBuilder ok(tmp / "clones" / "good__one");
    ok.write("A.java", "class A {}\n");
    ok.commit("a", 1600000000);
    std::filesystem::create_directories(tmp / "clones" / "bad__dir"); // not a repo

    BuildReport report = build_dataset(options(tmp / "clones", tmp / "ds", 2));
    CHECK(report.manifest.project_count == 1);
    REQUIRE(report.skipped.size() == 1);
    CHECK(report.skipped[0].first == "bad__dir");
}

TEST_CASE("unparseable java blobs are flagged, dataset still validates") {
    TempDir tmp;
    GitRepoBuilder repo(tmp / "clones" / "mixed__repo");
    repo.write("Good.java", "class Good {}\n");
    repo.write("Broken.java", "class Broken {\n"); // unbalanced
    repo.commit("c", 1600000000);

    BuildReport report = build_dataset(options(tmp / "clones", tmp / "ds", 1));
    CHECK(report.parse_failures == 1);
    CHECK(report.distinct_asts == 1);
    CHECK(validate_dataset(tmp / "ds").ok());

    DatasetReader reader(tmp / "ds");
    Project p = reader.load_project(0);
    const auto& files = p.repository.revisions[0].files;
    const auto broken = std::find_if(files.begin(), files.end(),
                                     [](const ChangedFile& f) { return f.path == "Broken.java"; });
    REQUIRE(broken != files.end());
    CHECK(broken->parse_error);
    CHECK(reader.find_ast(broken->blob_hash) == nullptr);
}

TEST_CASE("metadata join fills stars, url, created") {
    TempDir tmp;
    GitRepoBuilder repo(tmp / "clones" / "octo__demo");
    repo.write("A.java", "class A {}\n");
    repo.commit("a", 1600000000);
    spit(tmp / "meta" / "octo__demo.json",
         R"({"full_name":"octo/demo","html_url":"https://github.com/octo/demo",)"
         R"("stargazers_count":42,"fork":false,"default_branch":"main",)"
         R"("language":"Java","created_at":"2011-01-26T19:01:12Z"})");

    BuildOptions o = options(tmp / "clones", tmp / "ds", 1);
    o.metadata_dir = tmp / "meta";
    build_dataset(o);

    DatasetReader reader(tmp / "ds");
    Project p = reader.load_project(0);
    CHECK(p.id == "octo/demo");
    CHECK(p.stars == 42);
    CHECK(p.url == "https://github.com/octo/demo");
    CHECK(p.created == 1296068472000000LL);
    bool has_language = false;
    for (const auto& [k, v] : p.metadata)
        if (k == "language" && v == "Java") has_language = true;
    CHECK(has_language);
}

TEST_CASE("without metadata the defaults are zero") {
    TempDir tmp;
    GitRepoBuilder repo(tmp / "clones" / "plain__repo");
    repo.write("A.java", "class A {}\n");
    repo.commit("a", 1600000000);
    build_dataset(options(tmp / "clones", tmp / "ds", 1));
    DatasetReader reader(tmp / "ds");
    Project p = reader.load_project(0);
    CHECK(p.stars == 0);
    CHECK(p.created == 0);
}
