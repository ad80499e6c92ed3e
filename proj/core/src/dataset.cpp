#include "miner/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "miner/errors.hpp"
#include "miner/json_io.hpp"

namespace fs = std::filesystem;

namespace miner {

namespace {

constexpr const char* kManifestFile = "manifest.json";
constexpr const char* kProjectsFile = "projects.jsonl";
constexpr const char* kAstsFile = "asts.jsonl";

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw FormatError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> read_lines(const fs::path& p) {
    std::vector<std::string> lines;
    std::ifstream in(p, std::ios::binary);
    if (!in) throw FormatError("cannot open " + p.string());
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) lines.push_back(std::move(line));
        line.clear();
    }
    return lines;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + p.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write failed: " + p.string());
}

} // namespace

DatasetManifest write_dataset(const std::vector<Project>& projects,
                              const std::map<std::string, AstRoot>& ast_store,
                              const fs::path& dir, const std::string& name, Timestamp created) {
    if (fs::exists(dir)) {
        if (!fs::is_directory(dir)) throw InputError(dir.string() + " exists and is not a directory");
        if (!fs::is_empty(dir))
            throw InputError("refusing to write dataset into nonempty directory " + dir.string());
    } else {
        fs::create_directories(dir);
    }

    std::vector<const Project*> ordered;
    ordered.reserve(projects.size());
    for (const auto& p : projects) ordered.push_back(&p);
    std::sort(ordered.begin(), ordered.end(),
              [](const Project* a, const Project* b) { return a->id < b->id; });
    for (std::size_t i = 1; i < ordered.size(); ++i)
        if (ordered[i - 1]->id == ordered[i]->id)
            throw InputError("duplicate project id: " + ordered[i]->id);

    DatasetManifest m;
    m.format_version = 1;
    m.name = name;
    m.created = created;
    m.project_count = static_cast<std::int64_t>(projects.size());
    m.ast_count = static_cast<std::int64_t>(ast_store.size());

    std::string projects_text;
    for (const Project* p : ordered) {
        projects_text += project_json_line(*p);
        projects_text += '\n';
    }

    std::string asts_text;
    for (const auto& [hash, ast] : ast_store) { // std::map: sorted by hash
        asts_text += ast_json_line(hash, ast);
        asts_text += '\n';
    }

    write_file(dir / kManifestFile, to_json(m) + "\n");
    write_file(dir / kProjectsFile, projects_text);
    write_file(dir / kAstsFile, asts_text);
    return m;
}

DatasetReader::DatasetReader(const fs::path& dir) : dir_(dir) {
    const fs::path manifest_path = dir / kManifestFile;
    if (!fs::exists(manifest_path))
        throw FormatError("missing dataset manifest: " + manifest_path.string());
    try {
        manifest_ = manifest_from_json(read_file(manifest_path));
    } catch (const FormatError& e) {
        throw FormatError(manifest_path.string() + ": " + e.what());
    }
    if (manifest_.format_version != 1)
        throw UnsupportedVersionError(manifest_path.string() + ": unsupported format_version " +
                                      std::to_string(manifest_.format_version) +
                                      " (this build reads version 1)");

    project_lines_ = read_lines(dir / kProjectsFile);
    if (static_cast<std::int64_t>(project_lines_.size()) != manifest_.project_count)
        throw FormatError((dir / kProjectsFile).string() + ": manifest promises " +
                          std::to_string(manifest_.project_count) + " projects, found " +
                          std::to_string(project_lines_.size()));

    const auto ast_lines = read_lines(dir / kAstsFile);
    if (static_cast<std::int64_t>(ast_lines.size()) != manifest_.ast_count)
        throw FormatError((dir / kAstsFile).string() + ": manifest promises " +
                          std::to_string(manifest_.ast_count) + " asts, found " +
                          std::to_string(ast_lines.size()));
    for (const auto& line : ast_lines) {
        auto [hash, ast] = ast_from_json_line(line);
        asts_.emplace(std::move(hash), std::make_shared<const AstRoot>(std::move(ast)));
    }
}

Project DatasetReader::load_project(std::size_t index) const {
    return project_from_json(project_lines_.at(index));
}

std::shared_ptr<const AstRoot> DatasetReader::find_ast(const std::string& blob_hash) const {
    auto it = asts_.find(blob_hash);
    return it == asts_.end() ? nullptr : it->second;
}

namespace {

void check_enum_validity(const Project& p, ValidationReport& report);

void push_issue(ValidationReport& r, std::string check, std::string subject, std::string message) {
    r.issues.push_back({std::move(check), std::move(subject), std::move(message)});
}

// Walks the AST verifying structural string invariants the schema promises.
void check_modifiers(const std::vector<Modifier>& mods, const std::string& subject,
                     ValidationReport& report) {
    for (const auto& m : mods) {
        if (m.kind == ModifierKind::ANNOTATION && m.annotation_name.empty())
            push_issue(report, "enum-validity", subject, "ANNOTATION modifier with empty annotation_name");
        if (m.kind == ModifierKind::VISIBILITY && m.visibility != "public" &&
            m.visibility != "private" && m.visibility != "protected")
            push_issue(report, "enum-validity", subject,
                       "VISIBILITY modifier with visibility '" + m.visibility + "'");
    }
}

void check_declaration(const Declaration& d, const std::string& subject, ValidationReport& report) {
    check_modifiers(d.modifiers, subject, report);
    for (const auto& f : d.fields) check_modifiers(f.modifiers, subject, report);
    for (const auto& m : d.methods) {
        check_modifiers(m.modifiers, subject, report);
        for (const auto& p : m.params) check_modifiers(p.modifiers, subject, report);
    }
    for (const auto& n : d.nested) check_declaration(n, subject, report);
}

} // namespace

ValidationReport validate_dataset(const fs::path& dir) {
    ValidationReport report;

    DatasetManifest manifest;
    try {
        manifest = manifest_from_json(read_file(dir / kManifestFile));
    } catch (const Error& e) {
        push_issue(report, "format", kManifestFile, e.what());
        return report;
    }
    if (manifest.format_version != 1)
        push_issue(report, "format", kManifestFile,
                   "unsupported format_version " + std::to_string(manifest.format_version));

    std::vector<std::string> project_lines;
    std::vector<std::string> ast_lines;
    try {
        project_lines = read_lines(dir / kProjectsFile);
        ast_lines = read_lines(dir / kAstsFile);
    } catch (const Error& e) {
        push_issue(report, "format", dir.string(), e.what());
        return report;
    }

    report.projects_seen = static_cast<std::int64_t>(project_lines.size());
    report.asts_seen = static_cast<std::int64_t>(ast_lines.size());

    if (report.projects_seen != manifest.project_count)
        push_issue(report, "manifest-counts", kProjectsFile,
                   "manifest project_count=" + std::to_string(manifest.project_count) +
                       " but " + std::to_string(report.projects_seen) + " records present");
    if (report.asts_seen != manifest.ast_count)
        push_issue(report, "manifest-counts", kAstsFile,
                   "manifest ast_count=" + std::to_string(manifest.ast_count) + " but " +
                       std::to_string(report.asts_seen) + " records present");

    std::set<std::string> known_blobs;
    for (std::size_t i = 0; i < ast_lines.size(); ++i) {
        try {
            auto [hash, ast] = ast_from_json_line(ast_lines[i]);
            known_blobs.insert(hash);
        } catch (const Error& e) {
            push_issue(report, "format", std::string(kAstsFile) + ":" + std::to_string(i + 1),
                       e.what());
        }
    }

    for (std::size_t i = 0; i < project_lines.size(); ++i) {
        Project p;
        try {
            p = project_from_json(project_lines[i]);
        } catch (const Error& e) {
            // Enum decoding problems land here; attribute them to the check
            // that owns them rather than a generic format failure.
            push_issue(report, "enum-validity",
                       std::string(kProjectsFile) + ":" + std::to_string(i + 1), e.what());
            continue;
        }

        const auto& revs = p.repository.revisions;
        for (std::size_t r = 1; r < revs.size(); ++r) {
            const auto& prev = revs[r - 1];
            const auto& cur = revs[r];
            if (std::pair(prev.commit_time, prev.id) > std::pair(cur.commit_time, cur.id))
                push_issue(report, "revision-order", p.id,
                           "revision " + cur.id + " out of (commit_time, id) order");
        }
        if (revs.empty() && p.repository.head_index)
            push_issue(report, "revision-order", p.id, "head_index set on empty history");
        if (!revs.empty() &&
            (!p.repository.head_index || *p.repository.head_index >= revs.size()))
            push_issue(report, "revision-order", p.id, "head_index missing or out of range");

        for (const auto& rev : revs) {
            for (std::size_t f = 1; f < rev.files.size(); ++f)
                if (rev.files[f - 1].path >= rev.files[f].path) {
                    push_issue(report, "file-order", p.id,
                               "revision " + rev.id + " files not strictly sorted by path");
                    break;
                }
            for (const auto& f : rev.files) {
                if (f.change_kind == ChangeKind::DELETED && !f.blob_hash.empty())
                    push_issue(report, "enum-validity", p.id,
                               "DELETED file " + f.path + " carries a blob_hash");
                const bool wants_ast = f.file_kind == FileKind::SOURCE_JAVA && !f.parse_error &&
                                       f.change_kind != ChangeKind::DELETED && !f.blob_hash.empty();
                if (wants_ast && !known_blobs.count(f.blob_hash))
                    push_issue(report, "dangling-blob", p.id,
                               "revision " + rev.id + " file " + f.path +
                                   " references absent blob " + f.blob_hash);
            }
        }
        check_enum_validity(p, report);
    }
    return report;
}

namespace {

void check_enum_validity(const Project& p, ValidationReport& report) {
    for (const auto& rev : p.repository.revisions)
        for (const auto& f : rev.files)
            if (f.file_kind == FileKind::SOURCE_JAVA && f.change_kind != ChangeKind::DELETED &&
                f.blob_hash.empty() && !f.parse_error)
                push_issue(report, "enum-validity", p.id,
                           "file " + f.path + " has no blob_hash and no parse_error flag");
}

} // namespace

} // namespace miner
