#pragma once

#include <vector>

#include "miner/query/ast.hpp"
#include "miner/query/token.hpp"

namespace miner::query {

/// Parses a token stream (ending with END) into a Program. Throws
/// CompileError on the first syntax error.
Program parse_query(std::vector<Token> tokens);

/// Convenience: lex + parse.
Program parse_query_text(std::string_view text);

} // namespace miner::query
