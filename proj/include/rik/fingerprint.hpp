/*
 * Karp-Rabin substring fingerprints in O(r log(n/r)) space.
 *
 * kappa(S) = sum S[k] * c^(|S|-k) mod q over a prime q (default 2^61 - 1)
 * and a seeded base c, so kappa(S.S') = kappa(S) * c^|S'| + kappa(S').
 *
 * Storage mirrors the extraction hierarchy: fingerprints of the text
 * prefixes at every block boundary, then per half-block (4 per sampled
 * position per level, halving in width down to single characters) its own
 * fingerprint, the coordinates <sample, L> of an occurrence crossing a
 * sampled position, and the fingerprints of the two pieces that the
 * sampled position splits that occurrence into.  A range query walks at
 * most two root-to-leaf paths.
 *
 * Block geometry is defined over the cyclic extension of the text (index
 * n+1 wraps to 1) so every stored value is well defined; queried ranges
 * themselves always lie in [1, n].
 *
 * At build time, for texts up to a threshold, all equal-fingerprint pairs
 * of power-of-two-length substrings are verified character-equal; on a
 * collision the base is re-seeded and the build retried.
 */
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rik/extract.hpp"
#include "rik/locate.hpp"
#include "rik/rlfm.hpp"
#include "rik/text_bundle.hpp"

namespace rik {

struct FpOptions {
    std::uint64_t modulus = (std::uint64_t{1} << 61) - 1;
    pos_t audit_threshold = pos_t{1} << 14;  // audit texts with n <= this
    int audit_max_retries = 16;
};

struct FpStats {
    pos_t hops = 0;
};

// Direct Horner evaluation, the independent reference for tests.
std::uint64_t kappa_direct(std::span<const sym_t> s, std::uint64_t base,
                           std::uint64_t modulus);

// True iff no two unequal power-of-two-length substrings of the text share
// a fingerprint under (base, modulus).
bool audit_collision_free(std::span<const sym_t> text, std::uint64_t base,
                          std::uint64_t modulus);

class FingerprintIndex {
  public:
    FingerprintIndex() = default;

    static FingerprintIndex build(const TextBundle& b, const RlfmIndex& rlfm,
                                  const ToeholdSampler& toehold,
                                  std::uint64_t seed, FpOptions opts = {});
    static FingerprintIndex build(const TextBundle& b, std::uint64_t seed,
                                  FpOptions opts = {});

    // kappa(T[i..j]); i = j + 1 returns 0 (empty string).
    std::uint64_t kappa_range(pos_t i, pos_t j, FpStats* stats = nullptr) const;

    // Fingerprints of the longest power-of-two-length prefix and suffix of
    // T[i..j].
    std::pair<std::uint64_t, std::uint64_t> kappa_prime(pos_t i, pos_t j) const;

    pos_t n() const { return n_; }
    std::uint64_t modulus() const { return q_; }
    std::uint64_t base() const { return base_; }
    std::uint64_t seed() const { return seed_; }  // seed that produced base_
    int audit_retries() const { return retries_; }
    pos_t block_width() const { return block_width_; }
    pos_t level_count() const { return level_count_; }
    pos_t hop_bound() const { return 2 * (level_count_ + 1) + 2; }

    // Re-validate every stored fingerprint and occurrence split against
    // the bundle.
    bool audit_structure(const TextBundle& b) const;

    struct Unit {
        std::uint64_t kappa = 0;
        std::int64_t sample_idx = -1;
        pos_t split = 1;  // L: occurrence = X1[L..w] . X2[1..L-1]
        std::uint64_t kappa_piece1 = 0, kappa_piece2 = 0;
    };

    struct Parts {
        pos_t n, block_width, level_count;
        std::uint64_t q, base, seed;
        std::vector<pos_t> sample_positions;
        std::vector<std::uint64_t> prefix_kappa;       // per block boundary
        std::vector<Unit> block_units;                 // per level-0 block
        std::vector<std::vector<Unit>> level_units;    // [l-1][sample*4+u]
        std::vector<std::array<std::uint64_t, 2>> char_kappa;  // per sample
        std::vector<pos_t> exp_lengths;                // lengths with cached
                                                       // powers/inverses
    };
    Parts to_parts() const;
    static FingerprintIndex from_parts(Parts p);

  private:
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const;
    std::uint64_t pow_len(pos_t len) const;   // base^len
    std::uint64_t inv_len(pos_t len) const;   // base^-len
    std::uint64_t modpow(std::uint64_t x, std::uint64_t e) const;
    void cache_length(pos_t len);

    std::uint64_t block_kappa(pos_t level, pos_t sample, int block) const;
    const Unit& unit_at(pos_t level, pos_t sample, int block, int half) const;
    std::uint64_t prefix_of_unit(const Unit& u, pos_t width, pos_t next_level,
                                 pos_t take, FpStats* st) const;
    std::uint64_t suffix_of_unit(const Unit& u, pos_t width, pos_t next_level,
                                 pos_t take, FpStats* st) const;
    std::uint64_t prefix_of_block(pos_t level, pos_t sample, int block,
                                  pos_t take, FpStats* st) const;
    std::uint64_t suffix_of_block(pos_t level, pos_t sample, int block,
                                  pos_t take, FpStats* st) const;
    std::uint64_t window_kappa(pos_t level, pos_t sample, pos_t delta,
                               pos_t len, FpStats* st) const;

    pos_t n_ = 0;
    pos_t block_width_ = 1;
    pos_t level_count_ = 0;  // unit levels; level_count_+1 is the char level
    std::uint64_t q_ = (std::uint64_t{1} << 61) - 1;
    std::uint64_t base_ = 0;
    std::uint64_t inv_base_ = 0;
    std::uint64_t seed_ = 0;
    int retries_ = 0;
    SampledSet samples_;
    std::vector<std::uint64_t> prefix_kappa_;
    std::vector<Unit> block_units_;
    std::vector<std::vector<Unit>> level_units_;
    std::vector<std::array<std::uint64_t, 2>> char_kappa_;
    std::unordered_map<pos_t, std::uint64_t> pow_cache_, inv_cache_;
};

}  // namespace rik
