/*
 * Self-contained index over a byte text — counting, locating, character
 * extraction and substring fingerprints without the original text — plus
 * its binary file format.
 *
 * Layout (little endian):
 *   magic "RIK1", u32 format version,
 *   fixed header, u64 each: n, sigma, bwt runs, sampler radius, alpha,
 *   flags, fingerprint seed, fingerprint modulus,
 *   then sections until EOF, each: u32 id, u64 payload length, payload.
 * Readers skip sections with unknown ids and reject unsupported versions.
 */
#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "rik/extract.hpp"
#include "rik/fingerprint.hpp"
#include "rik/locate.hpp"
#include "rik/rlfm.hpp"
#include "rik/text_bundle.hpp"

namespace rik {

struct IndexBuildOptions {
    pos_t sampler_radius = 16;  // block size s for SA/LCP neighbor reads
    pos_t alpha = 8;            // extraction batch size
    bool with_extract = true;
    bool with_fingerprint = true;
    bool store_text = false;
    std::uint64_t fp_seed = 0x72616e6b746f70ULL;
    std::uint64_t fp_modulus = (std::uint64_t{1} << 61) - 1;
    pos_t fp_audit_threshold = pos_t{1} << 14;
    int fp_audit_max_retries = 16;
};

class Index {
  public:
    Index() = default;

    static Index build(std::span<const std::uint8_t> text,
                       IndexBuildOptions opts = {});
    static Index build(const TextBundle& b, IndexBuildOptions opts = {});

    // Number of occurrences of the byte pattern (0 for unmappable bytes).
    pos_t count(std::span<const std::uint8_t> pattern) const;
    // All occurrence positions, ascending, 1-based.
    std::vector<pos_t> locate(std::span<const std::uint8_t> pattern) const;
    // T[i..i+len-1] as bytes; requires the extraction structure.
    byte_string extract(pos_t i, pos_t len) const;
    // Fingerprint of T[i..j]; requires the fingerprint structure.
    std::uint64_t kappa(pos_t i, pos_t j) const;

    pos_t n() const { return n_; }
    pos_t sigma() const { return sigma_; }
    pos_t runs_count() const { return rlfm_.runs_count(); }
    pos_t sampler_radius() const { return sampler_.radius(); }
    pos_t alpha() const { return alpha_; }
    bool has_extract() const { return extract_.has_value(); }
    bool has_fingerprint() const { return fp_.has_value(); }
    bool has_text() const { return text_.has_value(); }
    // Stored text as bytes, including the final terminator byte.
    byte_string text_bytes() const;

    const AlphabetMap& alphabet() const { return alphabet_; }
    const RlfmIndex& rlfm() const { return rlfm_; }
    const ToeholdSampler& toehold() const { return toehold_; }
    const PhraseTable& phrase_table() const { return phrases_; }
    const RunBorderSampler& sampler() const { return sampler_; }
    const ExtractIndex& extract_index() const { return extract_.value(); }
    const FingerprintIndex& fingerprint_index() const { return fp_.value(); }

  private:
    pos_t n_ = 0;
    pos_t sigma_ = 0;
    pos_t alpha_ = 0;
    AlphabetMap alphabet_;
    RlfmIndex rlfm_;
    ToeholdSampler toehold_;
    PhraseTable phrases_;
    RunBorderSampler sampler_;
    std::optional<ExtractIndex> extract_;
    std::optional<FingerprintIndex> fp_;
    std::optional<sym_string> text_;

    friend void save_index(const Index&, std::ostream&);
    friend Index load_index(std::istream&);
};

void save_index(const Index& ix, std::ostream& out);
void save_index(const Index& ix, const std::string& path);
Index load_index(std::istream& in);
Index load_index(const std::string& path);

}  // namespace rik
