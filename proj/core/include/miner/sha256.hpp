#pragma once

#include <string>
#include <string_view>

namespace miner {

/// SHA-256 of the given bytes, lowercase hex.
std::string sha256_hex(std::string_view bytes);

} // namespace miner
