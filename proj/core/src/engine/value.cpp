#include "miner/engine/value.hpp"

#include <charconv>

namespace miner::engine {

std::string render_float(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, p);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
        s += ".0";
    return s;
}

std::string render_scalar(const Value& value) {
    if (std::holds_alternative<std::int64_t>(value.v))
        return std::to_string(std::get<std::int64_t>(value.v));
    if (std::holds_alternative<double>(value.v)) return render_float(std::get<double>(value.v));
    if (std::holds_alternative<bool>(value.v)) return std::get<bool>(value.v) ? "true" : "false";
    if (std::holds_alternative<std::string>(value.v)) return std::get<std::string>(value.v);
    return "<non-scalar>";
}

} // namespace miner::engine
