/*
 * Random-access extraction in O(r log(n/r)) space.
 *
 * SampledSet: the text positions whose character is the first or last of
 * its BWT run.  Every substring of T has an occurrence containing such a
 * position (a "primary" occurrence), found here by backward search.
 *
 * ExtractIndex: the text is cut into blocks of width B (smallest power of
 * two >= ceil(n/r)); each block points into a hierarchy of half-blocks
 * centered on sampled positions, halving in width per level, down to
 * windows of stored characters.  Reading any alpha characters follows one
 * pointer chain of at most ceil(log2(B/alpha)) + 2 hops.
 *
 * Blocks may overhang the end of the text (the overhang behaves as copies
 * of the terminator and is never requested); windows never extend left of
 * position 1 - overhanging storage is clipped to in-range characters.
 */
#pragma once

#include <cstdint>
#include <optional>

#include "rik/locate.hpp"
#include "rik/rlfm.hpp"
#include "rik/text_bundle.hpp"

namespace rik {

class SampledSet {
  public:
    SampledSet() = default;

    // with_anchor_positions additionally samples the equally spaced
    // positions 1 + i*ceil(n/r) needed when the structure also serves
    // anchor lookups.
    static SampledSet build(const TextBundle& b,
                            bool with_anchor_positions = false);

    pos_t size() const { return static_cast<pos_t>(positions_.size()); }
    pos_t at(pos_t idx) const {  // 0-based index
        return positions_[static_cast<size_t>(idx)];
    }
    bool contains(pos_t p) const;
    // Index of an exact member; asserts membership.
    pos_t index_of(pos_t p) const;
    const std::vector<pos_t>& positions() const { return positions_; }

    static SampledSet from_positions(std::vector<pos_t> sorted) {
        SampledSet s;
        s.positions_ = std::move(sorted);
        return s;
    }

  private:
    std::vector<pos_t> positions_;  // sorted ascending
};

struct PrimaryOccurrence {
    pos_t start;    // text position where the occurrence begins
    pos_t witness;  // sampled position inside [start, start + len - 1]
};

// An occurrence of T[lo..hi] that contains a sampled position, found by
// backward search over the run-length index (cases: the range stays
// strictly inside one run, hits a run border at its ends, or spans
// several runs).  Always exists.  The bundle supplies the characters
// driving the search.
PrimaryOccurrence find_primary_occurrence(const TextBundle& b,
                                          const RlfmIndex& rlfm,
                                          const ToeholdSampler& toehold,
                                          pos_t lo, pos_t hi);

// Brute-force counterpart used as the test / verification oracle: scan all
// occurrences, return the first containing a sampled position.
std::optional<PrimaryOccurrence> scan_primary_occurrence(
    const TextBundle& b, const SampledSet& samples, pos_t lo, pos_t hi);

struct ExtractStats {
    pos_t hops = 0;          // pointer-chain hops over all windows
    pos_t max_window_hops = 0;
};

class ExtractIndex {
  public:
    ExtractIndex() = default;

    static ExtractIndex build(const TextBundle& b, const RlfmIndex& rlfm,
                              const ToeholdSampler& toehold, pos_t alpha = 8);
    // Convenience overload constructing its own search structures.
    static ExtractIndex build(const TextBundle& b, pos_t alpha = 8);

    // T[i..i+len-1] as internal symbols.  len = 0 gives an empty result.
    sym_string extract(pos_t i, pos_t len, ExtractStats* stats = nullptr) const;

    pos_t n() const { return n_; }
    pos_t alpha() const { return alpha_; }
    bool plain() const { return plain_; }
    pos_t block_width() const { return block_width_; }
    pos_t level_count() const { return level_count_; }
    pos_t hop_bound() const;

    // Re-validate every stored pointer by character comparison against the
    // bundle; returns false and stops at the first inconsistency.
    bool audit(const TextBundle& b) const;

    struct Coord {
        std::int64_t sample_idx = -1;  // index into the sampled set, -1: unused
        pos_t offset = 0;              // 1-based offset into the target window
        bool valid() const { return sample_idx >= 0; }
    };

    // Serialization access to the raw tables.
    struct Parts {
        pos_t n, alpha, block_width, level_count;
        bool plain;
        sym_string plain_text;
        std::vector<pos_t> sample_positions;
        std::vector<Coord> block_coords;          // one per level-0 block
        std::vector<std::vector<Coord>> level_coords;  // [level-1][sample*7+t]
        std::vector<pos_t> window_lo;             // per sample
        std::vector<sym_string> window_chars;     // per sample
    };
    Parts to_parts() const;
    static ExtractIndex from_parts(Parts p);

  private:
    struct Hop {
        pos_t sample_idx;
        pos_t mapped_pos;
    };
    Coord coord_for_range(const TextBundle& b, const RlfmIndex& rlfm,
                          const ToeholdSampler& toehold, pos_t a, pos_t width,
                          pos_t next_width) const;
    sym_string extract_piece(pos_t i, pos_t len, ExtractStats* stats) const;

    pos_t n_ = 0;
    pos_t alpha_ = 8;
    pos_t block_width_ = 1;  // B
    pos_t level_count_ = 0;  // levels 1..level_count_ hold half-block coords;
                             // level_count_+1 is the character level
    bool plain_ = false;
    sym_string plain_text_;
    SampledSet samples_;
    std::vector<Coord> block_coords_;
    std::vector<std::vector<Coord>> level_coords_;
    std::vector<pos_t> window_lo_;
    std::vector<sym_string> window_chars_;
};

}  // namespace rik
