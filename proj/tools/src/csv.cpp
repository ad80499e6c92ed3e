#include "miner/csv.hpp"

#include <cstdlib>
#include <optional>
#include <vector>

#include "miner/errors.hpp"

namespace miner::cli {

namespace {

struct Row {
    std::string output;
    std::vector<std::string> keys;
    std::string value;
    std::optional<std::string> weight;
};

bool is_number(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

[[noreturn]] void bad_line(std::size_t line_no, const std::string& why) {
    throw FormatError("result line " + std::to_string(line_no) + ": " + why);
}

Row parse_line(const std::string& line, std::size_t line_no) {
    Row row;
    const auto bracket = line.find('[');
    if (bracket == std::string::npos || bracket == 0)
        bad_line(line_no, "expected 'name[keys...] = value'");
    row.output = line.substr(0, bracket);

    std::size_t pos = bracket;
    while (pos < line.size() && line[pos] == '[') {
        const auto close = line.find(']', pos + 1);
        if (close == std::string::npos) bad_line(line_no, "unterminated '['");
        row.keys.push_back(line.substr(pos + 1, close - pos - 1));
        pos = close + 1;
    }
    if (row.keys.size() == 1 && row.keys[0].empty()) row.keys.clear(); // "name[]" = no keys

    if (line.compare(pos, 3, " = ") != 0) bad_line(line_no, "expected ' = ' after keys");
    std::string rest = line.substr(pos + 3);

    // Trailing " weight <number>" marks a weighted row.
    const auto w = rest.rfind(" weight ");
    if (w != std::string::npos && is_number(rest.substr(w + 8))) {
        row.weight = rest.substr(w + 8);
        rest.resize(w);
    }
    row.value = std::move(rest);
    return row;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

} // namespace

std::string to_csv(const std::string& result_text, bool header) {
    std::vector<Row> rows;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < result_text.size()) {
        auto end = result_text.find('\n', start);
        if (end == std::string::npos) end = result_text.size();
        ++line_no;
        if (end > start) rows.push_back(parse_line(result_text.substr(start, end - start), line_no));
        start = end + 1;
    }

    std::size_t arity = 0;
    bool weighted = false;
    for (const auto& r : rows) {
        arity = std::max(arity, r.keys.size());
        weighted = weighted || r.weight.has_value();
    }

    std::string out;
    auto append_row = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += csv_field(fields[i]);
        }
        out += '\n'; // LF, matching the result-file convention
    };

    if (header) {
        std::vector<std::string> fields{"output"};
        for (std::size_t i = 1; i <= arity; ++i) fields.push_back("key" + std::to_string(i));
        fields.push_back("value");
        if (weighted) fields.push_back("weight");
        append_row(fields);
    }
    for (const auto& r : rows) {
        std::vector<std::string> fields{r.output};
        for (std::size_t i = 0; i < arity; ++i)
            fields.push_back(i < r.keys.size() ? r.keys[i] : std::string{});
        fields.push_back(r.value);
        if (weighted) fields.push_back(r.weight.value_or(""));
        append_row(fields);
    }
    return out;
}

} // namespace miner::cli
