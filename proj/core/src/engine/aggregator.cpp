#include "miner/engine/aggregator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace miner::engine {

namespace {

constexpr __int128 kInt64Max = std::numeric_limits<std::int64_t>::max();
constexpr __int128 kInt64Min = std::numeric_limits<std::int64_t>::min();

} // namespace

void ExactFloatSum::add(double v) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    const bool negative = bits >> 63;
    const int biased_exp = static_cast<int>((bits >> 52) & 0x7ff);
    std::uint64_t mantissa = bits & ((std::uint64_t{1} << 52) - 1);
    if (biased_exp == 0x7ff) return; // inf/nan rejected upstream
    int exp;
    if (biased_exp == 0) {
        exp = -1074; // subnormal
    } else {
        mantissa |= std::uint64_t{1} << 52;
        exp = biased_exp - 1075;
    }
    if (mantissa == 0) return;

    const int offset = exp + kBiasBits;
    const int limb = offset / 64;
    const int shift = offset % 64;

    // Mantissa spans at most two limbs once shifted.
    std::uint64_t lo = mantissa << shift;
    std::uint64_t hi = shift == 0 ? 0 : (mantissa >> (64 - shift));

    if (!negative) {
        unsigned __int128 acc = (unsigned __int128)limbs_[limb] + lo;
        limbs_[limb] = (std::uint64_t)acc;
        std::uint64_t carry = (std::uint64_t)(acc >> 64);
        acc = (unsigned __int128)limbs_[limb + 1] + hi + carry;
        limbs_[limb + 1] = (std::uint64_t)acc;
        carry = (std::uint64_t)(acc >> 64);
        for (int i = limb + 2; carry && i < kLimbCount; ++i) {
            acc = (unsigned __int128)limbs_[i] + carry;
            limbs_[i] = (std::uint64_t)acc;
            carry = (std::uint64_t)(acc >> 64);
        }
    } else {
        // Two's-complement subtraction with borrow propagation.
        unsigned __int128 acc = (unsigned __int128)limbs_[limb] - lo;
        limbs_[limb] = (std::uint64_t)acc;
        std::uint64_t borrow = (acc >> 64) ? 1 : 0;
        acc = (unsigned __int128)limbs_[limb + 1] - hi - borrow;
        limbs_[limb + 1] = (std::uint64_t)acc;
        borrow = (acc >> 64) ? 1 : 0;
        for (int i = limb + 2; borrow && i < kLimbCount; ++i) {
            acc = (unsigned __int128)limbs_[i] - borrow;
            limbs_[i] = (std::uint64_t)acc;
            borrow = (acc >> 64) ? 1 : 0;
        }
    }
}

void ExactFloatSum::merge(const ExactFloatSum& other) {
    std::uint64_t carry = 0;
    for (int i = 0; i < kLimbCount; ++i) {
        unsigned __int128 acc = (unsigned __int128)limbs_[i] + other.limbs_[i] + carry;
        limbs_[i] = (std::uint64_t)acc;
        carry = (std::uint64_t)(acc >> 64);
    }
}

double ExactFloatSum::to_double() const {
    std::array<std::uint64_t, kLimbCount> mag = limbs_;
    const bool negative = mag[kLimbCount - 1] >> 63;
    if (negative) { // magnitude = two's complement negate
        std::uint64_t carry = 1;
        for (int i = 0; i < kLimbCount; ++i) {
            unsigned __int128 acc = (unsigned __int128)(~mag[i]) + carry;
            mag[i] = (std::uint64_t)acc;
            carry = (std::uint64_t)(acc >> 64);
        }
    }

    int top = kLimbCount - 1;
    while (top >= 0 && mag[top] == 0) --top;
    if (top < 0) return 0.0;

    const int high_bit = top * 64 + (63 - std::countl_zero(mag[top])); // 0-based
    auto bit_at = [&](int b) -> unsigned {
        if (b < 0) return 0;
        return (mag[b / 64] >> (b % 64)) & 1u;
    };

    // Take the top 54 bits: 53-bit mantissa plus a round bit.
    std::uint64_t mantissa = 0;
    for (int b = high_bit; b > high_bit - 53 && b >= 0; --b)
        mantissa = (mantissa << 1) | bit_at(b);
    const int mantissa_bits = std::min(high_bit + 1, 53);
    const unsigned round_bit = bit_at(high_bit - 53);
    bool sticky = false;
    for (int b = high_bit - 54; b >= 0 && !sticky; --b) sticky = bit_at(b);

    if (round_bit && (sticky || (mantissa & 1))) ++mantissa; // half to even
    int exp = high_bit - (mantissa_bits - 1) - kBiasBits;
    if (mantissa >> mantissa_bits) { // rounding carried out
        mantissa >>= 1;
        ++exp;
    }

    double out = std::ldexp(static_cast<double>(mantissa), exp);
    return negative ? -out : out;
}

OutputSpec OutputSpec::from(const query::OutputDecl& decl) {
    OutputSpec spec;
    spec.name = decl.name;
    spec.kind = decl.agg;
    spec.top_n = decl.top_n;
    spec.value_is_float = decl.value_type.kind == query::Type::Kind::Float;
    spec.weight_is_float =
        decl.weight_type && decl.weight_type->kind == query::Type::Kind::Float;
    return spec;
}

std::vector<OutputSpec> output_specs(const query::Program& program) {
    std::vector<OutputSpec> specs;
    specs.reserve(program.outputs.size());
    for (const auto& o : program.outputs) specs.push_back(OutputSpec::from(o));
    return specs;
}

namespace {

// Total order on top entries: weight descending, rendered value ascending.
// NaN weights sort below every other weight.
bool top_less(const OutputSpec& spec, const TopEntry& a, const TopEntry& b) {
    if (spec.weight_is_float) {
        const bool an = std::isnan(a.weight_float), bn = std::isnan(b.weight_float);
        if (an != bn) return bn; // non-nan first
        if (!an && a.weight_float != b.weight_float) return a.weight_float > b.weight_float;
    } else if (a.weight_int != b.weight_int) {
        return a.weight_int > b.weight_int;
    }
    return a.value < b.value;
}

void top_insert(const OutputSpec& spec, std::vector<TopEntry>& top, TopEntry entry) {
    top.push_back(std::move(entry));
    std::sort(top.begin(), top.end(),
              [&](const TopEntry& a, const TopEntry& b) { return top_less(spec, a, b); });
    if (static_cast<std::int64_t>(top.size()) > spec.top_n)
        top.resize(static_cast<std::size_t>(spec.top_n));
}

std::int64_t checked_int64(__int128 v, const std::string& output) {
    if (v > kInt64Max || v < kInt64Min)
        throw AggregatorOverflow("output '" + output + "': integer total overflows 64-bit range");
    return static_cast<std::int64_t>(v);
}

} // namespace

AggregatorState::AggregatorState(std::vector<OutputSpec> specs) : specs_(std::move(specs)) {
    per_output_.resize(specs_.size());
}

bool AggregatorState::empty() const {
    for (const auto& m : per_output_)
        if (!m.empty()) return false;
    return true;
}

void AggregatorState::update(std::size_t output_index, Key key, const Value& value,
                             const Value* weight) {
    const OutputSpec& spec = specs_.at(output_index);
    Cell& cell = per_output_[output_index][std::move(key)];

    switch (spec.kind) {
    case query::AggKind::SUM:
        if (spec.value_is_float) {
            const double v = value.as_float();
            if (!std::isfinite(v))
                throw AggregatorOverflow("output '" + spec.name +
                                         "': non-finite float cannot be summed");
            cell.float_total.add(v);
        } else {
            cell.int_total += value.as_int();
            (void)checked_int64(cell.int_total, spec.name);
        }
        break;
    case query::AggKind::MEAN:
        if (spec.value_is_float) {
            const double v = value.as_float();
            if (!std::isfinite(v))
                throw AggregatorOverflow("output '" + spec.name +
                                         "': non-finite float cannot be averaged");
            cell.float_total.add(v);
        } else {
            cell.int_total += value.as_int();
            (void)checked_int64(cell.int_total, spec.name);
        }
        ++cell.count;
        break;
    case query::AggKind::COLLECTION:
        cell.values.push_back(render_scalar(value));
        break;
    case query::AggKind::SET:
        cell.set_values.insert(render_scalar(value));
        break;
    case query::AggKind::TOP: {
        TopEntry entry;
        entry.value = render_scalar(value);
        if (spec.weight_is_float) entry.weight_float = weight->as_float();
        else entry.weight_int = weight->as_int();
        top_insert(spec, cell.top, std::move(entry));
        break;
    }
    }
}

void AggregatorState::merge_from(const AggregatorState& other) {
    for (std::size_t o = 0; o < specs_.size(); ++o) {
        const OutputSpec& spec = specs_[o];
        for (const auto& [key, cell] : other.per_output_[o]) {
            Cell& mine = per_output_[o][key];
            switch (spec.kind) {
            case query::AggKind::SUM:
            case query::AggKind::MEAN:
                mine.int_total += cell.int_total;
                mine.float_total.merge(cell.float_total);
                mine.count += cell.count;
                break;
            case query::AggKind::COLLECTION:
                mine.values.insert(mine.values.end(), cell.values.begin(), cell.values.end());
                break;
            case query::AggKind::SET:
                mine.set_values.insert(cell.set_values.begin(), cell.set_values.end());
                break;
            case query::AggKind::TOP:
                for (const auto& e : cell.top) top_insert(spec, mine.top, e);
                break;
            }
        }
    }
}

std::vector<OutputRow> output_rows(const AggregatorState& state) {
    std::vector<OutputRow> rows;
    const auto& specs = state.specs();
    for (std::size_t o = 0; o < specs.size(); ++o) {
        const OutputSpec& spec = specs[o];
        for (const auto& [key, cell] : state.cells(o)) {
            switch (spec.kind) {
            case query::AggKind::SUM:
                rows.push_back({spec.name, key,
                                spec.value_is_float
                                    ? render_float(cell.float_total.to_double())
                                    : std::to_string(checked_int64(cell.int_total, spec.name)),
                                std::nullopt});
                break;
            case query::AggKind::MEAN: {
                const double total = spec.value_is_float
                                         ? cell.float_total.to_double()
                                         : static_cast<double>(cell.int_total);
                rows.push_back({spec.name, key,
                                render_float(total / static_cast<double>(cell.count)),
                                std::nullopt});
                break;
            }
            case query::AggKind::COLLECTION: {
                auto sorted = cell.values;
                std::sort(sorted.begin(), sorted.end());
                for (auto& v : sorted) rows.push_back({spec.name, key, std::move(v), std::nullopt});
                break;
            }
            case query::AggKind::SET:
                for (const auto& v : cell.set_values)
                    rows.push_back({spec.name, key, v, std::nullopt});
                break;
            case query::AggKind::TOP:
                for (const auto& e : cell.top)
                    rows.push_back({spec.name, key, e.value,
                                    spec.weight_is_float ? render_float(e.weight_float)
                                                         : std::to_string(e.weight_int)});
                break;
            }
        }
    }
    std::sort(rows.begin(), rows.end(), [](const OutputRow& a, const OutputRow& b) {
        if (a.name != b.name) return a.name < b.name;
        if (a.keys != b.keys) return a.keys < b.keys;
        if (a.value != b.value) return a.value < b.value;
        return a.weight.value_or("") < b.weight.value_or("");
    });
    return rows;
}

std::string render_rows(const std::vector<OutputRow>& rows) {
    std::string out;
    for (const auto& row : rows) {
        out += row.name;
        if (row.keys.empty()) {
            out += "[]";
        } else {
            for (const auto& k : row.keys) {
                out += '[';
                out += k;
                out += ']';
            }
        }
        out += " = ";
        out += row.value;
        if (row.weight) {
            out += " weight ";
            out += *row.weight;
        }
        out += '\n';
    }
    return out;
}

std::string render_output(const AggregatorState& state) { return render_rows(output_rows(state)); }

} // namespace miner::engine
