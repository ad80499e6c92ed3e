#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "miner/dataset.hpp"
#include "miner/errors.hpp"
#include "miner/json_io.hpp"

using namespace miner;
using minertest::TempDir;
using minertest::make_project;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

struct Fixture {
    std::vector<Project> projects;
    std::map<std::string, AstRoot> asts;
};

Fixture three_projects() {
    Fixture fx;
    fx.projects.push_back(make_project(
        "a/one", {{"One.java", "public class One { @Override public int x() { return 1; } }"}},
        fx.asts));
    fx.projects.push_back(
        make_project("b/two", {{"Two.java", "class Two {}"}, {"notes.txt", "n"}}, fx.asts));
    fx.projects.push_back(make_project("c/three", {{"Three.java", "interface Three {}"}}, fx.asts));
    return fx;
}

} // namespace

TEST_CASE("empty dataset writes zero counts") {
    TempDir tmp;
    auto manifest = write_dataset({}, {}, tmp / "ds", "empty");
    CHECK(manifest.project_count == 0);
    CHECK(manifest.ast_count == 0);
    CHECK(slurp(tmp / "ds" / "projects.jsonl").empty());
    CHECK(slurp(tmp / "ds" / "asts.jsonl").empty());
    DatasetReader reader(tmp / "ds");
    CHECK(reader.project_count() == 0);
}

TEST_CASE("two runs over the same input are byte-identical") {
    TempDir tmp;
    Fixture fx = three_projects();
    auto m1 = write_dataset(fx.projects, fx.asts, tmp / "d1", "fixture");
    auto m2 = write_dataset(fx.projects, fx.asts, tmp / "d2", "fixture");
    CHECK(m1.project_count == 3);
    CHECK(m1 == m2);
    for (const char* f : {"manifest.json", "projects.jsonl", "asts.jsonl"})
        CHECK(slurp(tmp / "d1" / f) == slurp(tmp / "d2" / f));
}

TEST_CASE("projects are sorted by id regardless of input order") {
    TempDir tmp;
    Fixture fx = three_projects();
    std::swap(fx.projects[0], fx.projects[2]);
    write_dataset(fx.projects, fx.asts, tmp / "ds", "fixture");
    DatasetReader reader(tmp / "ds");
    CHECK(reader.load_project(0).id == "a/one");
    CHECK(reader.load_project(2).id == "c/three");
}

TEST_CASE("a shared blob is stored once") {
    TempDir tmp;
    std::map<std::string, AstRoot> asts;
    const std::string same = "public class Same { }";
    std::vector<Project> ps{make_project("x/a", {{"Same.java", same}}, asts),
                            make_project("y/b", {{"Same.java", same}}, asts)};
    auto manifest = write_dataset(ps, asts, tmp / "ds", "dup");
    CHECK(manifest.project_count == 2);
    CHECK(manifest.ast_count == 1);
}

TEST_CASE("read after write is the identity") {
    TempDir tmp;
    Fixture fx = three_projects();
    write_dataset(fx.projects, fx.asts, tmp / "ds", "fixture");
    DatasetReader reader(tmp / "ds");
    REQUIRE(reader.project_count() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        Project p = reader.load_project(i);
        auto orig = std::find_if(fx.projects.begin(), fx.projects.end(),
                                 [&](const Project& q) { return q.id == p.id; });
        REQUIRE(orig != fx.projects.end());
        CHECK(p == *orig);
    }
    for (const auto& [hash, ast] : fx.asts) {
        auto found = reader.find_ast(hash);
        REQUIRE(found);
        CHECK(*found == ast);
    }
    CHECK(reader.find_ast("no-such-hash") == nullptr);
}

TEST_CASE("writing into a nonempty directory is refused") {
    TempDir tmp;
    Fixture fx = three_projects();
    write_dataset(fx.projects, fx.asts, tmp / "ds", "fixture");
    CHECK_THROWS_AS(write_dataset(fx.projects, fx.asts, tmp / "ds", "fixture"), InputError);
}

TEST_CASE("duplicate project ids are refused") {
    TempDir tmp;
    std::map<std::string, AstRoot> asts;
    std::vector<Project> ps{make_project("a/a", {}, asts), make_project("a/a", {}, asts)};
    CHECK_THROWS_AS(write_dataset(ps, asts, tmp / "ds", "dup"), InputError);
}

TEST_CASE("count mismatch raises a format error naming the file") {
    TempDir tmp;
    Fixture fx = three_projects();
    write_dataset(fx.projects, fx.asts, tmp / "ds", "fixture");
    // drop one record
    std::string lines = slurp(tmp / "ds" / "projects.jsonl");
    lines.erase(0, lines.find('\n') + 1);
    spit(tmp / "ds" / "projects.jsonl", lines);
    try {
        DatasetReader reader(tmp / "ds");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("projects.jsonl") != std::string::npos);
    }
}

TEST_CASE("unsupported format version") {
    TempDir tmp;
    write_dataset({}, {}, tmp / "ds", "v2");
    DatasetManifest m;
    m.format_version = 2;
    m.name = "v2";
    spit(tmp / "ds" / "manifest.json", to_json(m) + "\n");
    CHECK_THROWS_AS(DatasetReader(tmp / "ds"), UnsupportedVersionError);
}

TEST_CASE("missing manifest raises a format error naming it") {
    TempDir tmp;
    std::filesystem::create_directories(tmp / "nothere");
    try {
        DatasetReader reader(tmp / "nothere");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("manifest.json") != std::string::npos);
    }
}
