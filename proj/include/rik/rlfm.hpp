/*
 * Run-length FM-index over the BWT: O(r) words for an r-run BWT.
 *
 * Stored per run: its start position (predecessor keys), its symbol, and
 * the number of earlier occurrences of that symbol (so LF is O(1) after
 * one predecessor query).  Per symbol: the sorted list of run indices with
 * that symbol, plus cumulative tables over symbol-sorted runs, giving
 * rank(c, i) with exactly one predecessor query and one binary search.
 */
#pragma once

#include <cstdint>
#include <span>

#include "rik/pred_set.hpp"
#include "rik/text_bundle.hpp"

namespace rik {

struct SaRange {
    pos_t sp = 1, ep = 0;
    bool empty() const { return sp > ep; }
    pos_t size() const { return empty() ? 0 : ep - sp + 1; }
    bool operator==(const SaRange&) const = default;
};

class RlfmIndex {
  public:
    RlfmIndex() = default;

    static RlfmIndex build(const TextBundle& b) {
        sym_string run_syms;
        std::vector<pos_t> run_starts;
        run_syms.reserve(b.runs().size());
        run_starts.reserve(b.runs().size());
        for (const auto& run : b.runs()) {
            run_starts.push_back(run.start);
            run_syms.push_back(run.symbol);
        }
        return assemble(b.n(), b.sigma(), std::move(run_starts),
                        std::move(run_syms));
    }

    // Rebuilds every derived table from the minimal run representation
    // (used both by build and by deserialization).
    static RlfmIndex assemble(pos_t n, sym_t sigma,
                              std::vector<pos_t> run_starts,
                              sym_string run_symbols);

    pos_t n() const { return n_; }
    sym_t sigma() const { return sigma_; }
    pos_t runs_count() const { return r_; }
    const std::vector<pos_t>& run_starts() const { return run_starts_.keys(); }
    const sym_string& run_symbols() const { return run_symbols_; }

    // BWT[p], one predecessor query.
    sym_t access_bwt(pos_t p) const;

    // The run containing BWT position p: [start, end] and its symbol.
    struct RunSpan {
        pos_t start, end;
        sym_t symbol;
    };
    RunSpan run_span(pos_t p) const;

    // Occurrences of c in BWT[1..i]; i = 0 allowed.  Exactly one
    // predecessor query and one binary search per call.  Throws on a
    // symbol outside 1..sigma.
    pos_t rank(sym_t c, pos_t i) const;

    // LF(p) = C[BWT[p]] + rank(BWT[p], p): one predecessor query, O(1) rest.
    pos_t lf(pos_t p) const;

    // Suffix-array range of c . X given the range of X ([1, n] for X
    // empty).  Two rank calls; an empty result is returned, never stepped.
    SaRange backward_step(const SaRange& range, sym_t c) const;

    // Occurrence count of the pattern (internal symbols); processes the
    // pattern right to left and stops once the range empties.
    std::int64_t count(std::span<const sym_t> pattern) const;

    // Number of characters count() consumed in its last invocation (= m
    // when the pattern occurs).  Single-threaded test instrumentation.
    pos_t last_count_steps() const { return last_steps_; }

    // C[c]: occurrences of symbols smaller than c in the BWT (c may be
    // sigma+1, giving n).
    pos_t c_table(sym_t c) const { return c_[c - 1]; }

    std::uint64_t pred_query_count() const {
        return run_starts_.query_count();
    }
    void reset_pred_query_count() const { run_starts_.reset_query_count(); }

  private:
    struct RunHit {
        pos_t run_index;  // 1-based rank of the run
        pos_t start;
    };
    RunHit run_of(pos_t p) const;

    pos_t n_ = 0;
    sym_t sigma_ = 0;
    pos_t r_ = 0;
    PredSet<pos_t> run_starts_;   // key: run start, payload: run index 1..r
    sym_string run_symbols_;      // symbol per run
    std::vector<pos_t> same_sym_before_;      // occurrences of the run's
                                              // symbol in earlier runs
    std::vector<std::vector<pos_t>> by_sym_;  // run indices per symbol
    std::vector<pos_t> c_;                    // C[c], index c-1, c=1..sigma+1
    std::vector<pos_t> runs_before_sym_;      // C'[c]: runs of symbols < c
    std::vector<pos_t> len_cumulative_;       // D[0..r] over symbol-sorted runs
    mutable pos_t last_steps_ = 0;
};

}  // namespace rik
