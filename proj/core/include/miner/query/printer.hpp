#pragma once

#include <string>

#include "miner/query/ast.hpp"

namespace miner::query {

/// Renders a Program back to canonical source text. The output re-parses to
/// a structurally identical program (expressions fully parenthesized).
std::string to_source(const Program& program);

std::string to_source(const Expr& expr);
std::string to_source(const Type& type);

} // namespace miner::query
