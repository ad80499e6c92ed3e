#pragma once

#include <string>
#include <string_view>

#include "miner/schema.hpp"

// Canonical JSON forms used by the on-disk dataset layout. Object keys are
// emitted in schema field order; output is a pure function of the input.

namespace miner {

std::string to_json(const DatasetManifest& m);
std::string to_json(const Project& p);
std::string to_json(const AstRoot& ast);

/// One projects.jsonl record (no trailing newline).
std::string project_json_line(const Project& p);
/// One asts.jsonl record: {"blob_hash":...,"ast":{...}} (no trailing newline).
std::string ast_json_line(const std::string& blob_hash, const AstRoot& ast);

DatasetManifest manifest_from_json(std::string_view text);
Project project_from_json(std::string_view text);
/// Parses an asts.jsonl record into (blob_hash, ast).
std::pair<std::string, AstRoot> ast_from_json_line(std::string_view text);

} // namespace miner
