#include "miner/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "miner/csv.hpp"
#include "miner/dataset.hpp"
#include "miner/dataset_builder.hpp"
#include "miner/engine/interpreter.hpp"
#include "miner/errors.hpp"
#include "miner/github.hpp"
#include "miner/gitio.hpp"
#include "miner/query/diagnostics.hpp"
#include "miner/query/parser.hpp"
#include "miner/query/typecheck.hpp"

namespace fs = std::filesystem;

namespace miner::cli {

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInputError = 2;
constexpr int kPartialFailure = 3;
constexpr int kNetworkError = 4;

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw InputError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + p.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw InputError("write failed: " + p.string());
}

// One entry per line; '#' starts a comment.
std::vector<std::string> read_list_file(const fs::path& p) {
    std::vector<std::string> entries;
    std::istringstream in(read_file(p));
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        entries.push_back(line.substr(start));
    }
    return entries;
}

int default_jobs() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::optional<std::string> token_from(const std::map<std::string, std::string>& env,
                                      const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    auto it = env.find("GITHUB_TOKEN");
    if (it != env.end() && !it->second.empty()) return it->second;
    return std::nullopt;
}

struct CommonApiFlags {
    std::string api_base = "https://api.github.com";
    std::string token;
};

github::Client make_client(const CommonApiFlags& flags,
                           const std::map<std::string, std::string>& env) {
    github::ClientOptions opts;
    opts.api_base = flags.api_base;
    opts.token = token_from(env, flags.token);
    return github::Client(std::move(opts));
}

std::vector<CloneSource> clone_sources_from_metadata(const fs::path& metadata_dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(metadata_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<CloneSource> sources;
    for (const auto& f : files) {
        auto meta = github::repo_metadata_from_json(read_file(f));
        CloneSource src = resolve_clone_source(meta.full_name);
        if (!meta.html_url.empty()) src.url = meta.html_url + ".git";
        sources.push_back(std::move(src));
    }
    return sources;
}

int cmd_search(const github::SearchCriteria& criteria, const github::Client& client,
               const fs::path& out_dir, std::ostream& out) {
    auto repos = client.list_repositories(criteria);
    fs::create_directories(out_dir);
    for (const auto& m : repos) {
        auto slash = m.full_name.find('/');
        const fs::path file = out_dir / (m.full_name.substr(0, slash) + "__" +
                                         m.full_name.substr(slash + 1) + ".json");
        write_file(file, github::to_json(m) + "\n");
        out << m.full_name << '\t' << m.stargazers_count << '\n';
    }
    return kOk;
}

int cmd_fetch_metadata(const std::vector<std::string>& names, const github::Client& client,
                       const fs::path& out_dir, bool force, std::ostream& err) {
    auto outcome = github::fetch_repo_metadata(names, out_dir, client, force);
    for (const auto& p : outcome.skipped)
        err << "skipping " << p.string() << " (already present; use --force to refetch)\n";
    for (const auto& [name, reason] : outcome.failed)
        err << "failed: " << name << ": " << reason << '\n';
    return outcome.failed.empty() ? kOk : kPartialFailure;
}

int cmd_clone(const std::vector<CloneSource>& sources, const fs::path& dest, int jobs,
              std::ostream& out, std::ostream& err) {
    CloneReport report = clone_repositories(sources, dest, jobs);
    out << "cloned " << report.succeeded.size() << "/" << report.requested << " repositories\n";
    for (const auto& [name, reason] : report.failed)
        err << "failed: " << name << ": " << reason << '\n';
    return report.failed.empty() ? kOk : kPartialFailure;
}

int cmd_build(BuildOptions options, std::ostream& out, std::ostream& err) {
    options.progress = [&err](std::size_t done, std::size_t total) {
        if (done % 10 == 0 || done == total)
            err << "processed " << done << "/" << total << " repositories\n";
    };
    BuildReport report = build_dataset(options);
    for (const auto& [dir, reason] : report.skipped)
        err << "skipped " << dir << ": " << reason << '\n';
    out << "projects " << report.manifest.project_count << ", revisions " << report.revisions
        << ", distinct ASTs " << report.distinct_asts << ", parse failures "
        << report.parse_failures << '\n';
    return report.skipped.empty() ? kOk : kPartialFailure;
}

int cmd_info(const fs::path& dir, std::ostream& out) {
    DatasetReader reader(dir);
    const auto& m = reader.manifest();
    out << "name: " << m.name << '\n'
        << "format_version: " << m.format_version << '\n'
        << "created: " << m.created << '\n'
        << "projects: " << m.project_count << '\n'
        << "asts: " << m.ast_count << '\n';
    return kOk;
}

int cmd_validate(const fs::path& dir, std::ostream& out) {
    ValidationReport report = validate_dataset(dir);
    out << "projects: " << report.projects_seen << '\n'
        << "asts: " << report.asts_seen << '\n'
        << "issues: " << report.issues.size() << '\n';
    for (const auto& issue : report.issues)
        out << issue.check << '\t' << issue.subject << '\t' << issue.message << '\n';
    return report.ok() ? kOk : kInputError;
}

struct CompileFailure {
    std::string formatted;
};

int cmd_run(const fs::path& query_file, const fs::path& dataset_dir, int workers,
            const std::string& out_file, const std::string& errors_file, std::ostream& out,
            std::ostream& err) {
    const std::string text = read_file(query_file);

    auto registry = engine::BuiltinRegistry::with_defaults();
    query::TypedProgram program = [&] {
        try {
            return query::typecheck(query::parse_query_text(text), registry);
        } catch (const query::CompileError& e) {
            throw CompileFailure{
                query::format_diagnostics(query_file.string(), e.diagnostics())};
        }
    }();

    DatasetReader dataset(dataset_dir);
    engine::ExecResult result = engine::execute(program, dataset, workers, registry);

    if (out_file.empty()) out << result.rendered;
    else write_file(out_file, result.rendered);

    const std::string report = engine::render_errors_report(result.errors);
    if (!errors_file.empty()) write_file(errors_file, report);
    else if (!report.empty()) err << report;

    return result.partial_failure() ? kPartialFailure : kOk;
}

int cmd_csv(const fs::path& result_file, bool header, const std::string& out_file,
            std::ostream& out) {
    const std::string csv = to_csv(read_file(result_file), header);
    if (out_file.empty()) out << csv;
    else write_file(out_file, csv);
    return kOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, const std::map<std::string, std::string>& env,
            std::ostream& out, std::ostream& err) {
    CLI::App app{"Builds immutable datasets from git repositories and runs mining queries over them"};
    app.name("miner");
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    // search
    auto* search = app.add_subcommand("search", "Search GitHub and save repository metadata");
    github::SearchCriteria criteria;
    std::string language_flag;
    CommonApiFlags search_api;
    std::string search_out;
    search->add_option("--query", criteria.query, "search expression")->required();
    search->add_option("--min-stars", criteria.min_stars, "minimum stargazer count");
    search->add_option("--language", language_flag, "language filter");
    search->add_option("--max", criteria.max_results, "maximum results (<= 1000)");
    search->add_option("--api-base", search_api.api_base, "API base URL");
    search->add_option("--token", search_api.token, "API token (default: $GITHUB_TOKEN)");
    search->add_option("--out", search_out, "directory for metadata JSON files")->required();

    // fetch-metadata
    auto* fetch = app.add_subcommand("fetch-metadata", "Fetch repository metadata JSON files");
    std::string fetch_repos_file;
    std::vector<std::string> fetch_names;
    CommonApiFlags fetch_api;
    std::string fetch_out;
    bool fetch_force = false;
    fetch->add_option("--repos", fetch_repos_file, "file with one owner/name per line");
    fetch->add_option("names", fetch_names, "owner/name pairs");
    fetch->add_option("--out", fetch_out, "output directory")->required();
    fetch->add_option("--api-base", fetch_api.api_base, "API base URL");
    fetch->add_option("--token", fetch_api.token, "API token (default: $GITHUB_TOKEN)");
    fetch->add_flag("--force", fetch_force, "refetch names already present");

    // clone
    auto* clone = app.add_subcommand("clone", "Bare-clone repositories");
    std::string clone_metadata, clone_repos_file, clone_dest;
    int clone_jobs = default_jobs();
    clone->add_option("--metadata", clone_metadata, "metadata directory from search/fetch-metadata");
    clone->add_option("--repos", clone_repos_file, "file with one owner/name, path, or URL per line");
    clone->add_option("--dest", clone_dest, "destination directory")->required();
    clone->add_option("--jobs", clone_jobs, "concurrent clones")->check(CLI::PositiveNumber);

    // build
    auto* build = app.add_subcommand("build", "Build a dataset from cloned repositories");
    BuildOptions build_options;
    std::string build_metadata;
    build_options.jobs = default_jobs();
    build->add_option("--src", build_options.clones_root, "directory of clones")->required();
    build->add_option("--metadata", build_metadata, "metadata directory to join");
    build->add_option("--out", build_options.out_dir, "dataset output directory")->required();
    build->add_option("--name", build_options.name, "dataset name")->required();
    build->add_option("--jobs", build_options.jobs, "concurrent repositories")
        ->check(CLI::PositiveNumber);

    // info / validate
    auto* info = app.add_subcommand("info", "Print dataset manifest");
    std::string info_dir;
    info->add_option("dataset", info_dir, "dataset directory")->required();

    auto* validate = app.add_subcommand("validate", "Validate a dataset directory");
    std::string validate_dir;
    validate->add_option("dataset", validate_dir, "dataset directory")->required();

    // run
    auto* run = app.add_subcommand("run", "Run a query over a dataset");
    std::string run_query, run_dataset, run_out, run_errors;
    int run_workers = default_jobs();
    run->add_option("query", run_query, "query file (.boa)")->required();
    run->add_option("--dataset", run_dataset, "dataset directory")->required();
    run->add_option("--workers", run_workers, "parallel workers")->check(CLI::PositiveNumber);
    run->add_option("--out", run_out, "result file (default: stdout)");
    run->add_option("--errors", run_errors, "errors report file (default: stderr)");

    // csv
    auto* csv = app.add_subcommand("csv", "Convert a result file to CSV");
    std::string csv_file, csv_out;
    bool csv_header = false;
    csv->add_option("result", csv_file, "result file from `miner run`")->required();
    csv->add_flag("--header", csv_header, "emit a header row");
    csv->add_option("--out", csv_out, "output file (default: stdout)");

    std::vector<const char*> argv;
    argv.push_back("miner");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (search->parsed()) {
            if (!language_flag.empty()) criteria.language = language_flag;
            return cmd_search(criteria, make_client(search_api, env), search_out, out);
        }
        if (fetch->parsed()) {
            std::vector<std::string> names = fetch_names;
            if (!fetch_repos_file.empty())
                for (auto& n : read_list_file(fetch_repos_file)) names.push_back(std::move(n));
            if (names.empty()) {
                err << "fetch-metadata requires --repos or at least one owner/name\n"
                    << fetch->help();
                return kUsage;
            }
            return cmd_fetch_metadata(names, make_client(fetch_api, env), fetch_out, fetch_force,
                                      err);
        }
        if (clone->parsed()) {
            if (clone_metadata.empty() == clone_repos_file.empty()) {
                err << "clone requires exactly one of --metadata or --repos\n" << clone->help();
                return kUsage;
            }
            std::vector<CloneSource> sources;
            if (!clone_metadata.empty()) sources = clone_sources_from_metadata(clone_metadata);
            else
                for (const auto& line : read_list_file(clone_repos_file))
                    sources.push_back(resolve_clone_source(line));
            return cmd_clone(sources, clone_dest, clone_jobs, out, err);
        }
        if (build->parsed()) {
            if (!build_metadata.empty()) build_options.metadata_dir = build_metadata;
            return cmd_build(std::move(build_options), out, err);
        }
        if (info->parsed()) return cmd_info(info_dir, out);
        if (validate->parsed()) return cmd_validate(validate_dir, out);
        if (run->parsed())
            return cmd_run(run_query, run_dataset, run_workers, run_out, run_errors, out, err);
        if (csv->parsed()) return cmd_csv(csv_file, csv_header, csv_out, out);
        err << app.help();
        return kUsage;
    } catch (const CompileFailure& e) {
        err << e.formatted;
        return kInputError;
    } catch (const RateLimitError& e) {
        err << "error: " << e.what() << '\n';
        return kNetworkError;
    } catch (const NetworkError& e) {
        err << "error: " << e.what() << '\n';
        return kNetworkError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    }
}

} // namespace miner::cli
