/*
 * Locating occurrences in O(r)-style space.
 *
 * ToeholdSampler: per symbol, the BWT positions that begin or end a run of
 * that symbol, keyed for predecessor search, each carrying the text
 * position of that BWT character (SA[q]-1, wrapping to n when SA[q] = 1).
 * Backward search maintains one known (SA position, SA value) pair inside
 * the current range; a pattern match therefore ends with both the range
 * and one suffix-array value in it.
 *
 * PhraseTable: the text split into phrases at positions i where i = 1 or
 * ISA[i+1] begins/ends a BWT run.  Keyed by SA[p]-1, it returns the
 * suffix-array neighbors (SA[p-1], SA[p+1]) for any p via one predecessor
 * query plus offset arithmetic.
 *
 * RunBorderSampler: SA and LCP values sampled at every position within
 * distance s of a BWT run border, supporting block reads of s' <= s
 * consecutive SA / LCP cells around any position whose SA value is known.
 */
#pragma once

#include <atomic>
#include <functional>
#include <optional>

#include "rik/pred_set.hpp"
#include "rik/rlfm.hpp"
#include "rik/text_bundle.hpp"

namespace rik {

// (SA position, SA value) held during backward search.
struct Anchor {
    pos_t sa_pos = 0;
    pos_t sa_value = 0;
    bool operator==(const Anchor&) const = default;
};

class ToeholdSampler {
  public:
    ToeholdSampler() = default;
    static ToeholdSampler build(const TextBundle& b);

    // Largest run-border position q <= x with BWT[q] = c, and the text
    // position of that character.
    std::optional<PredSet<pos_t>::Hit> pred(sym_t c, pos_t x) const;

    sym_t sigma() const { return static_cast<sym_t>(by_sym_.size()); }
    const PredSet<pos_t>& set_for(sym_t c) const {
        return by_sym_.at(static_cast<size_t>(c) - 1);
    }

    static ToeholdSampler from_sets(std::vector<PredSet<pos_t>> sets) {
        ToeholdSampler t;
        t.by_sym_ = std::move(sets);
        return t;
    }

  private:
    std::vector<PredSet<pos_t>> by_sym_;  // index c-1
};

struct CountAnchorResult {
    SaRange range;
    Anchor anchor;  // anchor.sa_pos in [range.sp, range.ep]
};

// Observer invoked after each backward step with the number of pattern
// characters processed so far and the current range/anchor.
using StepObserver =
    std::function<void(pos_t chars_done, const SaRange&, const Anchor&)>;

// Backward search that also maintains the toe-hold anchor.  Returns
// nullopt when the pattern does not occur.  The pattern uses internal
// symbols; out-of-alphabet symbols throw (remap first).
std::optional<CountAnchorResult> count_and_anchor(
    const RlfmIndex& rlfm, const ToeholdSampler& toehold,
    std::span<const sym_t> pattern, const StepObserver& observer = nullptr);

// Suffix-array neighbor pair; 0 means "no neighbor" (p = 1 has no left
// neighbor, p = n no right neighbor).
struct SaNeighbors {
    pos_t left = 0;
    pos_t right = 0;
    bool operator==(const SaNeighbors&) const = default;
};
inline constexpr pos_t no_neighbor = 0;

class PhraseTable {
  public:
    PhraseTable() = default;
    static PhraseTable build(const TextBundle& b);

    // Given v = SA[p] for any p, returns (SA[p-1], SA[p+1]).
    SaNeighbors neighbors(pos_t sa_value) const;

    const PredSet<SaNeighbors>& starts() const { return starts_; }
    static PhraseTable from_set(PredSet<SaNeighbors> s) {
        PhraseTable t;
        t.starts_ = std::move(s);
        return t;
    }

  private:
    // key: phrase start in SA[p]-1 space (key 0 covers SA[p] = 1);
    // payload: neighbor pair at the phrase start.
    PredSet<SaNeighbors> starts_;
};

class RunBorderSampler {
  public:
    RunBorderSampler() = default;

    // Samples every SA position within distance s of a run border
    // (virtual borders before position 1 and after position n included).
    static RunBorderSampler build(const TextBundle& b, pos_t s);

    pos_t radius() const { return s_; }
    pos_t sample_count() const { return static_cast<pos_t>(sa_samples_.size()); }

    // SA[p+1..p+count] (forward) or SA[p-1..p-count] reversed into
    // ascending positions (backward), given v = SA[p].  Preconditions:
    // 1 <= count <= s and the requested cells lie in [1, n].
    std::vector<pos_t> sa_block_forward(pos_t v, pos_t count) const;
    std::vector<pos_t> sa_block_backward(pos_t v, pos_t count) const;

    // LCP[p+1..p+count] given v = SA[p]; and LCP[p-count+1..p] given v.
    std::vector<pos_t> lcp_block_right(pos_t v, pos_t count) const;
    std::vector<pos_t> lcp_block_left(pos_t v, pos_t count) const;

    std::uint64_t block_fetches() const {
        return fetches_.load(std::memory_order_relaxed);
    }
    void reset_block_fetches() const {
        fetches_.store(0, std::memory_order_relaxed);
    }

    // Serialization access.
    const std::vector<pos_t>& sa_samples() const { return sa_samples_; }
    const std::vector<pos_t>& lcp_samples() const { return lcp_samples_; }
    const PredSet<pos_t>& pred_forward() const { return fwd_; }
    const PredSet<pos_t>& pred_backward() const { return bwd_; }
    static RunBorderSampler from_parts(pos_t s, std::vector<pos_t> sa_samples,
                                       std::vector<pos_t> lcp_samples,
                                       PredSet<pos_t> fwd, PredSet<pos_t> bwd);

    // The atomic fetch counter blocks defaulted special members.
    RunBorderSampler(const RunBorderSampler& o)
        : s_(o.s_),
          sa_samples_(o.sa_samples_),
          lcp_samples_(o.lcp_samples_),
          fwd_(o.fwd_),
          bwd_(o.bwd_),
          fetches_(o.block_fetches()) {}
    RunBorderSampler(RunBorderSampler&& o) noexcept
        : s_(o.s_),
          sa_samples_(std::move(o.sa_samples_)),
          lcp_samples_(std::move(o.lcp_samples_)),
          fwd_(std::move(o.fwd_)),
          bwd_(std::move(o.bwd_)),
          fetches_(o.block_fetches()) {}
    RunBorderSampler& operator=(RunBorderSampler o) {
        s_ = o.s_;
        sa_samples_ = std::move(o.sa_samples_);
        lcp_samples_ = std::move(o.lcp_samples_);
        fwd_ = std::move(o.fwd_);
        bwd_ = std::move(o.bwd_);
        fetches_.store(o.block_fetches(), std::memory_order_relaxed);
        return *this;
    }

  private:
    pos_t s_ = 1;
    // Sampled positions j_1 < ... < j_t (SA positions), their SA values
    // minus one and their LCP values.
    std::vector<pos_t> sa_samples_;   // W[k] = SA[j_k] - 1 (literal, >= 0)
    std::vector<pos_t> lcp_samples_;  // LCP[j_k]
    // Keys: W-values of positions whose following (fwd) / preceding (bwd)
    // s cells are all sampled; payload: 0-based index into the samples.
    PredSet<pos_t> fwd_, bwd_;
    mutable std::atomic<std::uint64_t> fetches_{0};

    friend struct RunBorderSamplerTestPeer;
};

// All occurrence positions of the pattern, ascending.  Expands the
// toe-hold anchor with ceil(occ/s)-bounded block fetches.
std::vector<pos_t> locate_all(const RlfmIndex& rlfm,
                              const ToeholdSampler& toehold,
                              const RunBorderSampler& sampler,
                              std::span<const sym_t> pattern);

}  // namespace rik
