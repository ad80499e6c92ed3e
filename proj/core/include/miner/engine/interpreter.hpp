#pragma once

#include <string>
#include <vector>

#include "miner/dataset.hpp"
#include "miner/engine/aggregator.hpp"
#include "miner/engine/builtins.hpp"
#include "miner/query/typecheck.hpp"

namespace miner::engine {

/// Runtime failure inside one project's evaluation: position + message.
class EvalError : public Error {
public:
    EvalError(query::Pos pos, const std::string& msg) : Error(msg), pos_(pos) {}
    query::Pos pos() const { return pos_; }

private:
    query::Pos pos_;
};

struct ProjectError {
    std::size_t project_index = 0;
    std::string project_id;
    query::Pos pos;
    std::string message;
};

struct ExecResult {
    std::string rendered;              // render_output text
    std::vector<OutputRow> rows;       // same content, structured
    std::vector<ProjectError> errors;  // one entry per failed project
    bool partial_failure() const { return !errors.empty(); }
};

/// Evaluates the program against every project of the dataset with the given
/// number of workers. Output is byte-identical for every worker count. A
/// failing project loses its partial emissions, is recorded in `errors`, and
/// never aborts the run.
ExecResult execute(const query::TypedProgram& program, const DatasetReader& dataset, int workers,
                   const BuiltinRegistry& builtins);

/// Single-project evaluation into a scratch state. Throws EvalError.
void evaluate_project(const query::TypedProgram& program, const Project& project,
                      const DatasetReader* dataset, const BuiltinRegistry& builtins,
                      AggregatorState& scratch);

/// Errors report: one line per failed project,
/// "<project-id>\t<line>:<col>\t<message>".
std::string render_errors_report(const std::vector<ProjectError>& errors);

} // namespace miner::engine
