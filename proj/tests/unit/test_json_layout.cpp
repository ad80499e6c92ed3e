#include <doctest.h>

#include <nlohmann/json.hpp>

#include "miner/errors.hpp"
#include "miner/json_io.hpp"

using namespace miner;

namespace {

Project tiny_project() {
    Project p;
    p.id = "octo/demo";
    p.name = "demo";
    p.url = "https://example.invalid/octo/demo";
    p.stars = 7;
    p.created = 1296068472000000;
    p.metadata = {{"language", "Java"}, {"fork", "false"}}; // insertion order kept
    Revision rev;
    rev.id = "aa11";
    rev.author = "A <a@x>";
    rev.committer = "C <c@x>";
    rev.commit_time = 1577836800000000;
    rev.log = "hello\nworld";
    ChangedFile f;
    f.path = "src/Main.java";
    f.change_kind = ChangeKind::ADDED;
    f.file_kind = FileKind::SOURCE_JAVA;
    f.blob_hash = "deadbeef";
    rev.files.push_back(f);
    p.repository.url = p.url;
    p.repository.revisions.push_back(std::move(rev));
    p.repository.head_index = 0;
    return p;
}

std::vector<std::string> object_keys(const std::string& json_text) {
    auto j = nlohmann::ordered_json::parse(json_text);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    return keys;
}

} // namespace

TEST_CASE("manifest keys follow schema field order") {
    DatasetManifest m;
    m.name = "d";
    CHECK(object_keys(to_json(m)) ==
          std::vector<std::string>{"format_version", "name", "created", "project_count",
                                   "ast_count"});
}

TEST_CASE("project record keys and nested orders") {
    const std::string text = project_json_line(tiny_project());
    CHECK(object_keys(text) == std::vector<std::string>{"id", "name", "url", "stars", "created",
                                                        "metadata", "repository"});
    auto j = nlohmann::ordered_json::parse(text);
    CHECK(j["repository"]["revisions"][0]["files"][0]["change_kind"] == "ADDED");
    CHECK(j["repository"]["revisions"][0]["files"][0]["file_kind"] == "SOURCE_JAVA");
    // metadata object preserves insertion order
    std::vector<std::string> meta_keys;
    for (auto it = j["metadata"].begin(); it != j["metadata"].end(); ++it)
        meta_keys.push_back(it.key());
    CHECK(meta_keys == std::vector<std::string>{"language", "fork"});
}

TEST_CASE("absent head_index serializes as null") {
    Project p;
    p.id = "empty/repo";
    auto j = nlohmann::ordered_json::parse(project_json_line(p));
    CHECK(j["repository"]["head_index"].is_null());
}

TEST_CASE("project json round-trips") {
    Project p = tiny_project();
    CHECK(project_from_json(project_json_line(p)) == p);
}

TEST_CASE("ast record round-trips") {
    AstRoot ast;
    ast.ns.name = "pkg";
    ast.ns.imports = {"java.util.List"};
    Declaration d;
    d.name = "C";
    d.kind = DeclarationKind::CLASS;
    d.modifiers.push_back({ModifierKind::ANNOTATION, "", "Override", ""});
    ast.ns.declarations.push_back(std::move(d));

    auto [hash, back] = ast_from_json_line(ast_json_line("abc123", ast));
    CHECK(hash == "abc123");
    CHECK(back == ast);
}

TEST_CASE("malformed json raises FormatError") {
    CHECK_THROWS_AS(project_from_json("{oops"), FormatError);
    CHECK_THROWS_AS(manifest_from_json("[]"), FormatError);
    CHECK_THROWS_AS(ast_from_json_line("{\"blob_hash\":1}"), FormatError);
}

TEST_CASE("invalid enum member raises FormatError") {
    std::string text = project_json_line(tiny_project());
    auto pos = text.find("\"ADDED\"");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 7, "\"BOGUS\"");
    CHECK_THROWS_AS(project_from_json(text), FormatError);
}
