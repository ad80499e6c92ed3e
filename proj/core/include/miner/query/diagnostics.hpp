#pragma once

#include <string>
#include <vector>

#include "miner/errors.hpp"
#include "miner/query/token.hpp"

namespace miner::query {

struct Diagnostic {
    Pos pos;
    std::string message;
};

/// Compilation failure carrying one diagnostic per problem found.
class CompileError : public Error {
public:
    explicit CompileError(std::vector<Diagnostic> diags)
        : Error(diags.empty() ? "compile error" : diags.front().message),
          diagnostics_(std::move(diags)) {}

    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

/// "<file>:<line>:<col>: error: <message>" per diagnostic, one per line.
std::string format_diagnostics(const std::string& file, const std::vector<Diagnostic>& diags);

} // namespace miner::query
