#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "miner/engine/value.hpp"
#include "miner/errors.hpp"
#include "miner/query/ast.hpp"

namespace miner::engine {

/// Exact fixed-point accumulator for double sums. Addition is exact (no
/// rounding), so accumulation and merging are associative and commutative:
/// any partitioning of the same emissions yields the same state bit for bit.
/// Layout: two's-complement integer scaled by 2^-kBiasBits.
class ExactFloatSum {
public:
    /// Adds a finite double exactly.
    void add(double v);
    void merge(const ExactFloatSum& other);
    /// Nearest double (ties to even); +/-inf when the exact sum overflows.
    double to_double() const;

    friend bool operator==(const ExactFloatSum&, const ExactFloatSum&) = default;

private:
    static constexpr int kLimbCount = 40;   // 2560 bits
    static constexpr int kBiasBits = 1152;  // covers 2^-1074 .. 2^1023 with headroom
    std::array<std::uint64_t, kLimbCount> limbs_{};
};

/// What the aggregator needs to know about one declared output.
struct OutputSpec {
    std::string name;
    query::AggKind kind = query::AggKind::SUM;
    std::int64_t top_n = 0;
    bool value_is_float = false;  // SUM/MEAN only
    bool weight_is_float = false; // TOP only

    static OutputSpec from(const query::OutputDecl& decl);
};

std::vector<OutputSpec> output_specs(const query::Program& program);

struct TopEntry {
    std::string value; // rendered
    std::int64_t weight_int = 0;
    double weight_float = 0.0;
};

/// Raised when an integer aggregate leaves the 64-bit range.
class AggregatorOverflow : public Error {
public:
    using Error::Error;
};

/// Mergeable partial results keyed by (output, index tuple). Updates happen
/// on per-project scratch states; merging combines scratch/worker states.
class AggregatorState {
public:
    using Key = std::vector<std::string>;

    explicit AggregatorState(std::vector<OutputSpec> specs);

    const std::vector<OutputSpec>& specs() const { return specs_; }

    /// Folds one emission into the state. Weight must be present exactly for
    /// TOP outputs. Throws AggregatorOverflow when an int SUM/MEAN total
    /// leaves the 64-bit range.
    void update(std::size_t output_index, Key key, const Value& value, const Value* weight);

    /// Combines `other` into this state. Associative and commutative with
    /// update streams; never throws on int range (totals stay exact
    /// internally and are range-checked at render time).
    void merge_from(const AggregatorState& other);

    bool empty() const;

    struct Cell {
        // SUM / MEAN
        __int128 int_total = 0;
        ExactFloatSum float_total;
        std::int64_t count = 0;
        // COLLECTION
        std::vector<std::string> values;
        // SET
        std::set<std::string> set_values;
        // TOP
        std::vector<TopEntry> top;
    };

    const std::map<Key, Cell>& cells(std::size_t output_index) const {
        return per_output_[output_index];
    }

private:
    std::vector<OutputSpec> specs_;
    std::vector<std::map<Key, Cell>> per_output_;
};

struct OutputRow {
    std::string name;
    std::vector<std::string> keys;
    std::string value;
    std::optional<std::string> weight;
};

/// Rows sorted ascending by (name, keys, value). Throws when an int total
/// cannot be represented in 64 bits.
std::vector<OutputRow> output_rows(const AggregatorState& state);

/// `name[k1][k2] = value` (zero keys render as `name[]`; TOP rows append
/// ` weight <w>`), one line each, in row order.
std::string render_rows(const std::vector<OutputRow>& rows);

std::string render_output(const AggregatorState& state);

} // namespace miner::engine
