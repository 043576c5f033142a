/*
 * Repetitiveness measures: a bidirectional macro scheme derived from the
 * BWT runs (two directives per run: one copy, one explicit character),
 * greedy left-to-right Lempel-Ziv parses (with and without source
 * overlap), Fibonacci test strings, and a combined statistics report.
 */
#pragma once

#include <span>
#include <vector>

#include "rik/text_bundle.hpp"

namespace rik {

// One phrase T[start .. start+copy_len]: copy_len characters copied from
// T[source .. source+copy_len-1] (source may point anywhere, including
// forward), then one explicit final character.
struct MacroPhrase {
    pos_t start = 0;
    pos_t copy_len = 0;
    pos_t source = 0;  // unused when copy_len == 0
    sym_t last = 0;
};

class MacroScheme {
  public:
    MacroScheme() = default;

    // Scheme with one phrase per BWT run; phrase boundaries are the sorted
    // suffix-array values at run starts.
    static MacroScheme from_runs(const TextBundle& b);

    static MacroScheme from_phrases(pos_t n, std::vector<MacroPhrase> ph) {
        MacroScheme m;
        m.n_ = n;
        m.phrases_ = std::move(ph);
        return m;
    }

    pos_t n() const { return n_; }
    pos_t phrase_count() const { return static_cast<pos_t>(phrases_.size()); }
    // Every phrase contributes a copy and an explicit character.
    pos_t directive_count() const { return 2 * phrase_count(); }
    // Zero-length copies skipped.
    pos_t directive_count_nonempty() const;
    const std::vector<MacroPhrase>& phrases() const { return phrases_; }

    // Structural soundness: full coverage of [1, n], in-bounds sources.
    bool validate() const;
    // Resolve all copy chains; throws invalid_scheme_error on malformed
    // schemes or cyclic chains.
    sym_string reconstruct() const;

  private:
    pos_t n_ = 0;
    std::vector<MacroPhrase> phrases_;
};

// One greedy parse phrase: either a literal character (source == 0,
// length == 1) or length characters copied from the earlier occurrence
// starting at source.
struct LzPhrase {
    pos_t start = 0;
    pos_t length = 0;
    pos_t source = 0;
    sym_t literal = 0;
};

// Greedy left-to-right parse; each phrase is the longest prefix of the
// rest that occurs starting earlier (leftmost such start on ties), or a
// single fresh character.  With allow_overlap the earlier occurrence may
// run past the phrase start.
std::vector<LzPhrase> lz_parse(std::span<const sym_t> text,
                               bool allow_overlap);

sym_string lz_decode(pos_t n, const std::vector<LzPhrase>& phrases);

// k-th Fibonacci string over {a, b}: F_1 = "a", F_2 = "b",
// F_k = F_{k-1} F_{k-2}.  Throws invalid_input_error when k < 1 or the
// result would exceed max_len.
byte_string fibonacci_text(int k, pos_t max_len = pos_t{1} << 24);

struct TextStats {
    pos_t n = 0;
    pos_t sigma = 0;
    pos_t bwt_runs = 0;
    pos_t macro_phrases = 0;
    pos_t macro_directives_raw = 0;
    pos_t macro_directives = 0;
    pos_t z = 0;
    pos_t z_no_overlap = 0;
};

TextStats compute_stats(const TextBundle& b);

}  // namespace rik
