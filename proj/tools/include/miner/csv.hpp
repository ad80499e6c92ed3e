#pragma once

#include <string>

namespace miner::cli {

/// Converts render_output text to RFC-4180 CSV. Columns:
/// output,key1..keyN,value[,weight] with N the maximum key arity in the
/// input; shorter rows are padded with empty fields. Row order is preserved.
/// Throws FormatError naming the line number on malformed input.
std::string to_csv(const std::string& result_text, bool header);

} // namespace miner::cli
