#include "miner/engine/builtins.hpp"

#include "miner/errors.hpp"
#include "miner/snapshot.hpp"

namespace miner::engine {

void BuiltinRegistry::register_builtin(const std::string& name, BuiltinSignature signature,
                                       BuiltinFn fn, bool absorbing) {
    auto [it, inserted] = builtins_.emplace(name, Builtin{std::move(signature), std::move(fn),
                                                          absorbing});
    if (!inserted) throw InputError("builtin '" + name + "' is already registered");
}

const Builtin* BuiltinRegistry::find(const std::string& name) const {
    auto it = builtins_.find(name);
    return it == builtins_.end() ? nullptr : &it->second;
}

BuiltinRegistry BuiltinRegistry::with_defaults() {
    using query::Type;
    BuiltinRegistry reg;

    reg.register_builtin(
        "getsnapshot",
        {{ParamSpec::exact(Type::node("CodeRepository")), ParamSpec::time_like()},
         1,
         Type::array(Type::node("ChangedFile"))},
        [](std::span<const Value> args, EvalContext&) -> Value {
            const auto* repo = std::get<const CodeRepository*>(args[0].as_node());
            std::optional<Timestamp> at;
            if (args.size() > 1) at = args[1].as_int();
            auto files = snapshot_files(*repo, at);
            auto arr = std::make_shared<std::vector<Value>>();
            arr->reserve(files.size());
            for (const ChangedFile* f : files) arr->push_back(Value(NodeRef(f)));
            return Value(Value::Array(std::move(arr)));
        });

    // def(e): the interpreter evaluates the argument in failure-absorbing
    // mode; this body only sees the success case.
    reg.register_builtin(
        "def", {{ParamSpec::any()}, 1, Type::bool_()},
        [](std::span<const Value>, EvalContext&) -> Value { return Value(true); },
        /*absorbing=*/true);

    reg.register_builtin("len", {{ParamSpec::any_array()}, 1, Type::int_()},
                         [](std::span<const Value> args, EvalContext&) -> Value {
                             return Value(static_cast<std::int64_t>(args[0].as_array()->size()));
                         });

    return reg;
}

} // namespace miner::engine
