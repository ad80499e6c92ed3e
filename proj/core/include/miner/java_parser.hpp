#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "miner/schema.hpp"

namespace miner::java {

struct ParseFailure {
    int line = 1;
    int column = 1;
    std::string message;
};

struct ParseResult {
    std::optional<AstRoot> ast;
    std::optional<ParseFailure> failure;
    bool ok() const { return ast.has_value(); }
};

/// Parses java source into the mining schema's AST. Constructs outside the
/// modeled subset are absorbed into OTHER statements/expressions; genuinely
/// unparseable input (unbalanced braces, lexical garbage) yields a failure
/// with the position of the first fatal error.
ParseResult parse_source(std::string_view content, FileKind kind);

} // namespace miner::java
