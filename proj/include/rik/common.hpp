/*
 * Shared types and error classes for the run-length indexed text library.
 *
 * All public position contracts are 1-based: text positions are 1..n,
 * suffix-array / BWT positions are 1..n.  The effective alphabet is
 * 1..sigma with symbol 1 reserved for the terminator, which is strictly
 * smaller than every other symbol.
 */
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rik {

// 1-based text / suffix-array position (signed: offset arithmetic is common).
using pos_t = std::int64_t;

// Symbol of the effective alphabet, 1..sigma.  uint16_t because an input
// using all 255 non-reserved byte values plus the terminator needs 256
// distinct symbols.
using sym_t = std::uint16_t;

using sym_string = std::vector<sym_t>;
using byte_string = std::vector<std::uint8_t>;

// Reserved input byte interpreted as the terminator.
inline constexpr std::uint8_t terminator_byte = 0;
// Internal symbol of the terminator.
inline constexpr sym_t terminator_sym = 1;

// Build rejected the raw input (empty input, oversized, ...).
struct invalid_input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Raw input contains the reserved terminator byte before its last position.
struct reserved_byte_error : invalid_input_error {
    using invalid_input_error::invalid_input_error;
};

// A copy/explicit-char scheme cannot be replayed (unresolvable cycle, bad
// tiling, out-of-range directive).
struct invalid_scheme_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Serialization problems: bad magic, unsupported version, truncated file.
struct index_format_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline byte_string to_bytes(std::string_view s) {
    return byte_string(s.begin(), s.end());
}

inline pos_t ceil_div(pos_t a, pos_t b) { return (a + b - 1) / b; }

// Smallest power of two >= x (x >= 1).
inline pos_t ceil_pow2(pos_t x) {
    pos_t p = 1;
    while (p < x) p <<= 1;
    return p;
}

inline pos_t ceil_log2(pos_t x) {
    pos_t l = 0, p = 1;
    while (p < x) {
        p <<= 1;
        ++l;
    }
    return l;
}

}  // namespace rik
