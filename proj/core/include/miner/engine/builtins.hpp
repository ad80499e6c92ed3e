#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "miner/engine/value.hpp"
#include "miner/query/types.hpp"

namespace miner {
class DatasetReader;
}

namespace miner::engine {

/// Everything a builtin implementation may touch at call time.
struct EvalContext {
    const Project* project = nullptr;
    const DatasetReader* dataset = nullptr;
};

struct ParamSpec {
    enum class Match { Exact, Any, AnyArray, TimeLike };
    Match match = Match::Exact;
    query::Type type;

    static ParamSpec exact(query::Type t) { return {Match::Exact, std::move(t)}; }
    static ParamSpec any() { return {Match::Any, {}}; }
    static ParamSpec any_array() { return {Match::AnyArray, {}}; }
    /// time or int (microseconds since epoch)
    static ParamSpec time_like() { return {Match::TimeLike, {}}; }
};

struct BuiltinSignature {
    std::vector<ParamSpec> params;
    std::size_t min_args = 0; // trailing params beyond min_args are optional
    query::Type result;
};

using BuiltinFn = std::function<Value(std::span<const Value>, EvalContext&)>;

struct Builtin {
    BuiltinSignature signature;
    BuiltinFn fn;
    bool absorbing = false; // def: argument evaluated in failure-absorbing mode
};

/// Named language-level functions, resolved at typecheck and called by the
/// interpreter. Registration happens before compilation begins.
class BuiltinRegistry {
public:
    BuiltinRegistry() = default;

    /// The bundled set: getsnapshot, def, len.
    static BuiltinRegistry with_defaults();

    /// Throws InputError on duplicate names.
    void register_builtin(const std::string& name, BuiltinSignature signature, BuiltinFn fn,
                          bool absorbing = false);

    const Builtin* find(const std::string& name) const;

private:
    std::map<std::string, Builtin> builtins_;
};

} // namespace miner::engine
