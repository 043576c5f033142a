/*
 * Text preprocessing: alphabet remapping, suffix array, inverse suffix
 * array, longest-common-prefix array, Burrows-Wheeler transform and its
 * run decomposition.  Everything downstream consumes this bundle.
 *
 * Conventions (all 1-based):
 *   SA[1..n]   ranks suffixes; SA[1] is the terminator suffix.
 *   ISA[SA[p]] = p.
 *   LCP[1] = 0, LCP[p] = lcp(T[SA[p-1]..], T[SA[p]..]) for p > 1.
 *   BWT[p] = T[SA[p]-1] if SA[p] > 1, else T[n].
 *   phi(i) = SA[ISA[i]-1] if ISA[i] > 1, else SA[n].
 */
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "rik/common.hpp"

namespace rik {

// Injective byte -> symbol map.  The reserved terminator byte maps to
// symbol 1; the remaining distinct input bytes map, in increasing byte
// order, to 2..sigma.
class AlphabetMap {
  public:
    AlphabetMap() { to_sym_.fill(0); }

    static AlphabetMap from_text(std::span<const std::uint8_t> text_with_term);

    // Rebuild from the symbol -> byte table (deserialization).
    static AlphabetMap from_bytes(std::vector<std::uint8_t> to_byte) {
        AlphabetMap m;
        m.to_byte_ = std::move(to_byte);
        for (std::size_t i = 0; i < m.to_byte_.size(); ++i) {
            m.to_sym_[m.to_byte_[i]] = static_cast<sym_t>(i + 1);
        }
        return m;
    }

    // 0 if the byte has no symbol.
    sym_t map(std::uint8_t b) const { return to_sym_[b]; }
    std::uint8_t unmap(sym_t s) const { return to_byte_.at(s - 1); }
    sym_t sigma() const { return static_cast<sym_t>(to_byte_.size()); }

    // Remaps a byte pattern; nullopt if any byte has no symbol (such a
    // pattern cannot occur in the text).
    std::optional<sym_string> map_pattern(
        std::span<const std::uint8_t> pattern) const;

    byte_string unmap_string(std::span<const sym_t> syms) const;

    bool operator==(const AlphabetMap& o) const {
        return to_byte_ == o.to_byte_;
    }

  private:
    std::array<sym_t, 256> to_sym_;
    std::vector<std::uint8_t> to_byte_;  // index sym-1 -> byte
};

struct RunRecord {
    pos_t start;   // BWT position of the first character of the run
    pos_t length;  // number of characters
    sym_t symbol;
};

class TextBundle {
  public:
    // Remaps raw bytes, appends the terminator if absent, and computes all
    // derived arrays.  Throws invalid_input_error on empty input and
    // reserved_byte_error if the terminator byte occurs before the end.
    static TextBundle build(std::span<const std::uint8_t> raw);

    pos_t n() const { return n_; }
    sym_t sigma() const { return alphabet_.sigma(); }
    pos_t runs_count() const { return static_cast<pos_t>(runs_.size()); }

    const AlphabetMap& alphabet() const { return alphabet_; }
    const sym_string& text() const { return text_; }
    const std::vector<pos_t>& sa() const { return sa_; }
    const std::vector<pos_t>& isa() const { return isa_; }
    const std::vector<pos_t>& lcp() const { return lcp_; }
    const sym_string& bwt() const { return bwt_; }
    const std::vector<RunRecord>& runs() const { return runs_; }

    // 1-based accessors.
    sym_t text_at(pos_t i) const { return text_[static_cast<size_t>(i - 1)]; }
    pos_t sa_at(pos_t p) const { return sa_[static_cast<size_t>(p - 1)]; }
    pos_t isa_at(pos_t i) const { return isa_[static_cast<size_t>(i - 1)]; }
    pos_t lcp_at(pos_t p) const { return lcp_[static_cast<size_t>(p - 1)]; }
    sym_t bwt_at(pos_t p) const { return bwt_[static_cast<size_t>(p - 1)]; }

    // Text position one step left in text order through suffix-array
    // adjacency: phi(i) = SA[ISA[i]-1], wrapping to SA[n] when ISA[i] = 1.
    pos_t phi(pos_t i) const;

    // Original bytes T[1..n] (terminator included, as the reserved byte).
    byte_string raw_bytes() const { return alphabet_.unmap_string(text_); }

  private:
    pos_t n_ = 0;
    AlphabetMap alphabet_;
    sym_string text_;
    std::vector<pos_t> sa_, isa_, lcp_;
    sym_string bwt_;
    std::vector<RunRecord> runs_;
};

// Suffix array by prefix doubling with radix sort per round, O(n log n).
// Input symbols must be >= 1.  Returns 1-based positions.
std::vector<pos_t> suffix_sort(std::span<const sym_t> text);

// Reference implementations used by tests and cmd_verify: a direct text
// scan, independent of every index structure.
std::int64_t oracle_count(const TextBundle& b,
                          std::span<const std::uint8_t> pattern);
std::vector<pos_t> oracle_locate(const TextBundle& b,
                                 std::span<const std::uint8_t> pattern);
std::int64_t oracle_count_syms(const TextBundle& b,
                               std::span<const sym_t> pattern);
std::vector<pos_t> oracle_locate_syms(const TextBundle& b,
                                      std::span<const sym_t> pattern);

// Number of distinct length-k substrings of T[1..n] (terminator included),
// computed from the suffix array and LCP array.
std::int64_t distinct_kmer_count(const TextBundle& b, pos_t k);

}  // namespace rik
