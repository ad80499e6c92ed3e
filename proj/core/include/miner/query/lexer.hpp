#pragma once

#include <string_view>
#include <vector>

#include "miner/query/token.hpp"

namespace miner::query {

/// Longest-match tokenization; '#' comments skipped; throws CompileError on
/// illegal characters or unterminated strings. The final token is END.
std::vector<Token> lex(std::string_view text);

bool is_keyword(std::string_view word);

} // namespace miner::query
