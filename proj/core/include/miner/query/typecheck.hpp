#pragma once

#include "miner/engine/builtins.hpp"
#include "miner/query/ast.hpp"

namespace miner::query {

/// A program whose expressions carry types, whose emissions are bound to
/// their output declarations, and whose enum references are resolved.
struct TypedProgram {
    Program program;
};

/// Checks the program against the schema and builtin registry, annotating it
/// in place. Throws CompileError carrying every diagnostic found.
TypedProgram typecheck(Program program, const engine::BuiltinRegistry& builtins);

} // namespace miner::query
