#include "rik/extract.hpp"

#include <algorithm>
#include <cassert>

namespace rik {

SampledSet SampledSet::build(const TextBundle& b, bool with_anchor_positions) {
    std::vector<pos_t> ps;
    auto text_pos = [&](pos_t q) {
        pos_t v = b.sa_at(q);
        return v > 1 ? v - 1 : b.n();
    };
    for (const auto& run : b.runs()) {
        ps.push_back(text_pos(run.start));
        if (run.length > 1) ps.push_back(text_pos(run.start + run.length - 1));
    }
    if (with_anchor_positions) {
        pos_t step = ceil_div(b.n(), b.runs_count());
        for (pos_t i = 1; i <= b.n(); i += step) ps.push_back(i);
    }
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    SampledSet s;
    s.positions_ = std::move(ps);
    return s;
}

bool SampledSet::contains(pos_t p) const {
    return std::binary_search(positions_.begin(), positions_.end(), p);
}

pos_t SampledSet::index_of(pos_t p) const {
    auto it = std::lower_bound(positions_.begin(), positions_.end(), p);
    assert(it != positions_.end() && *it == p);
    return static_cast<pos_t>(it - positions_.begin());
}

PrimaryOccurrence find_primary_occurrence(const TextBundle& b,
                                          const RlfmIndex& rlfm,
                                          const ToeholdSampler& toehold,
                                          pos_t lo, pos_t hi) {
    assert(1 <= lo && lo <= hi && hi <= b.n());
    sym_t c = b.text_at(hi);
    auto hit = toehold.pred(c, b.n());
    assert(hit.has_value());
    pos_t occ_start = hit->payload, witness = hit->payload;
    SaRange range = rlfm.backward_step({1, b.n()}, c);
    assert(!range.empty());
    for (pos_t i = hi - 1; i >= lo; --i) {
        c = b.text_at(i);
        auto run = rlfm.run_span(range.sp);
        if (run.symbol == c && run.start < range.sp && run.end > range.ep) {
            // Whole range preceded by c with no run border inside: the
            // current occurrence extends one character to the left.
            --occ_start;
        } else {
            // Otherwise some run of c begins or ends inside the range;
            // restart the occurrence at that bordered character.
            auto border = toehold.pred(c, range.ep);
            assert(border.has_value() && border->key >= range.sp);
            occ_start = border->payload;
            witness = border->payload;
        }
        range = rlfm.backward_step(range, c);
        assert(!range.empty());
    }
    assert(occ_start >= 1 && occ_start + (hi - lo) <= b.n());
    assert(witness >= occ_start && witness <= occ_start + (hi - lo));
    return {occ_start, witness};
}

std::optional<PrimaryOccurrence> scan_primary_occurrence(
    const TextBundle& b, const SampledSet& samples, pos_t lo, pos_t hi) {
    const pos_t len = hi - lo + 1;
    for (pos_t o = 1; o + len - 1 <= b.n(); ++o) {
        pos_t j = 0;
        while (j < len && b.text_at(o + j) == b.text_at(lo + j)) ++j;
        if (j < len) continue;
        // First sampled position >= o, if it falls inside the occurrence.
        const auto& ps = samples.positions();
        auto it = std::lower_bound(ps.begin(), ps.end(), o);
        if (it != ps.end() && *it <= o + len - 1)
            return PrimaryOccurrence{o, *it};
    }
    return std::nullopt;
}

ExtractIndex::Coord ExtractIndex::coord_for_range(
    const TextBundle& b, const RlfmIndex& rlfm, const ToeholdSampler& toehold,
    pos_t a, pos_t width, pos_t next_width) const {
    pos_t lo = std::max<pos_t>(1, a), hi = std::min(b.n(), a + width - 1);
    if (lo > hi) return {};  // fully outside the text, never descended into
    auto occ = find_primary_occurrence(b, rlfm, toehold, lo, hi);
    pos_t virtual_start = occ.start - (lo - a);
    Coord c;
    c.sample_idx = samples_.index_of(occ.witness);
    c.offset = virtual_start - samples_.at(c.sample_idx) + next_width;
    assert(c.offset >= 1 && c.offset <= next_width);
    return c;
}

ExtractIndex ExtractIndex::build(const TextBundle& b, const RlfmIndex& rlfm,
                                 const ToeholdSampler& toehold, pos_t alpha) {
    if (alpha < 1) throw std::invalid_argument("extract: alpha must be >= 1");
    ExtractIndex e;
    e.n_ = b.n();
    e.alpha_ = alpha;
    const pos_t r = b.runs_count();
    e.block_width_ = ceil_pow2(ceil_div(b.n(), r));
    if (b.n() <= 4 * alpha * r || e.block_width_ < 4 * alpha) {
        e.plain_ = true;
        e.plain_text_ = b.text();
        return e;
    }
    e.samples_ = SampledSet::build(b);
    const pos_t B = e.block_width_;
    // Coordinate levels have block halfwidth s_l = B / 2^(l-1) >= 4*alpha;
    // the level after the last one stores characters.
    pos_t levels = 0;
    while ((B >> levels) >= 4 * alpha) ++levels;
    e.level_count_ = levels - 1;  // s_l for l = 1..levels, leaf = levels
    assert(e.level_count_ >= 1);

    const pos_t nb = ceil_div(b.n(), B);
    e.block_coords_.reserve(static_cast<size_t>(nb));
    for (pos_t k = 0; k < nb; ++k)
        e.block_coords_.push_back(
            e.coord_for_range(b, rlfm, toehold, k * B + 1, B, B));

    const pos_t t = e.samples_.size();
    e.level_coords_.assign(static_cast<size_t>(e.level_count_), {});
    for (pos_t l = 1; l <= e.level_count_; ++l) {
        const pos_t s = B >> (l - 1), half = s / 2, quarter = s / 4;
        auto& lvl = e.level_coords_[static_cast<size_t>(l - 1)];
        lvl.resize(static_cast<size_t>(t) * 7);
        for (pos_t k = 0; k < t; ++k) {
            pos_t j = e.samples_.at(k);
            for (pos_t q = 0; q < 7; ++q)
                lvl[static_cast<size_t>(k * 7 + q)] = e.coord_for_range(
                    b, rlfm, toehold, j - s + q * quarter, half, half);
        }
    }

    const pos_t leaf_half = B >> e.level_count_;  // s at the character level
    e.window_lo_.reserve(static_cast<size_t>(t));
    e.window_chars_.reserve(static_cast<size_t>(t));
    for (pos_t k = 0; k < t; ++k) {
        pos_t j = e.samples_.at(k);
        pos_t lo = std::max<pos_t>(1, j - leaf_half);
        pos_t hi = std::min(b.n(), j + leaf_half - 1);
        e.window_lo_.push_back(lo);
        sym_string w;
        w.reserve(static_cast<size_t>(hi - lo + 1));
        for (pos_t x = lo; x <= hi; ++x) w.push_back(b.text_at(x));
        e.window_chars_.push_back(std::move(w));
    }
    return e;
}

ExtractIndex ExtractIndex::build(const TextBundle& b, pos_t alpha) {
    auto rlfm = RlfmIndex::build(b);
    auto toehold = ToeholdSampler::build(b);
    return build(b, rlfm, toehold, alpha);
}

pos_t ExtractIndex::hop_bound() const {
    return ceil_log2(ceil_div(block_width_, alpha_)) + 2;
}

sym_string ExtractIndex::extract_piece(pos_t i, pos_t len,
                                       ExtractStats* stats) const {
    // The piece lies inside one level-0 block.
    const pos_t B = block_width_;
    pos_t block = (i - 1) / B;  // 0-based
    pos_t hops = 0;
    const Coord& c0 = block_coords_[static_cast<size_t>(block)];
    assert(c0.valid());
    pos_t sample = c0.sample_idx;
    pos_t mu = (samples_.at(sample) - B + c0.offset) + (i - (block * B + 1));
    ++hops;
    for (pos_t l = 1; l <= level_count_; ++l) {
        const pos_t s = B >> (l - 1), half = s / 2, quarter = s / 4;
        pos_t xs = samples_.at(sample) - s;
        pos_t delta = mu - xs;
        assert(delta >= 0 && delta + len <= 2 * s);
        pos_t q = std::min<pos_t>(delta / quarter, 6);
        pos_t hb = xs + q * quarter;
        assert(mu >= hb && mu + len - 1 <= hb + half - 1);
        const Coord& c =
            level_coords_[static_cast<size_t>(l - 1)]
                         [static_cast<size_t>(sample * 7 + q)];
        assert(c.valid());
        mu = (samples_.at(c.sample_idx) - half + c.offset) + (mu - hb);
        sample = c.sample_idx;
        ++hops;
    }
    [[maybe_unused]] const pos_t leaf_half = B >> level_count_;
    [[maybe_unused]] pos_t j = samples_.at(sample);
    assert(mu >= j - leaf_half && mu + len - 1 <= j + leaf_half - 1);
    pos_t lo = window_lo_[static_cast<size_t>(sample)];
    const auto& w = window_chars_[static_cast<size_t>(sample)];
    assert(mu >= lo &&
           mu - lo + len <= static_cast<pos_t>(w.size()));
    sym_string out(w.begin() + (mu - lo), w.begin() + (mu - lo + len));
    if (stats) {
        stats->hops += hops;
        stats->max_window_hops = std::max(stats->max_window_hops, hops);
    }
    return out;
}

sym_string ExtractIndex::extract(pos_t i, pos_t len,
                                 ExtractStats* stats) const {
    if (len < 0 || i < 1 || i + len - 1 > n_)
        throw std::out_of_range("extract: range outside the text");
    sym_string out;
    out.reserve(static_cast<size_t>(len));
    if (len == 0) return out;
    if (plain_) {
        out.assign(plain_text_.begin() + (i - 1),
                   plain_text_.begin() + (i - 1 + len));
        return out;
    }
    const pos_t B = block_width_;
    pos_t at = i;
    pos_t remaining = len;
    while (remaining > 0) {
        pos_t chunk = std::min(remaining, alpha_);
        // Never cross a block boundary within one descent.
        pos_t block_end = ((at - 1) / B + 1) * B;
        chunk = std::min(chunk, block_end - at + 1);
        auto piece = extract_piece(at, chunk, stats);
        out.insert(out.end(), piece.begin(), piece.end());
        at += chunk;
        remaining -= chunk;
    }
    return out;
}

bool ExtractIndex::audit(const TextBundle& b) const {
    if (plain_) return plain_text_ == b.text();
    auto check_unit = [&](const Coord& c, pos_t a, pos_t width,
                          pos_t next_width) {
        pos_t lo = std::max<pos_t>(1, a), hi = std::min(b.n(), a + width - 1);
        if (lo > hi) return !c.valid();
        if (!c.valid()) return false;
        pos_t j = samples_.at(c.sample_idx);
        pos_t virtual_start = j - next_width + c.offset;
        pos_t occ_lo = virtual_start + (lo - a), occ_hi = virtual_start + (hi - a);
        if (occ_lo < 1 || occ_hi > b.n()) return false;
        if (j < occ_lo || j > occ_hi) return false;  // witness inside
        for (pos_t x = 0; x <= hi - lo; ++x)
            if (b.text_at(lo + x) != b.text_at(occ_lo + x)) return false;
        return true;
    };
    const pos_t B = block_width_;
    for (pos_t k = 0; k < static_cast<pos_t>(block_coords_.size()); ++k)
        if (!check_unit(block_coords_[static_cast<size_t>(k)], k * B + 1, B, B))
            return false;
    for (pos_t l = 1; l <= level_count_; ++l) {
        const pos_t s = B >> (l - 1), half = s / 2, quarter = s / 4;
        for (pos_t k = 0; k < samples_.size(); ++k) {
            pos_t j = samples_.at(k);
            for (pos_t q = 0; q < 7; ++q) {
                const Coord& c =
                    level_coords_[static_cast<size_t>(l - 1)]
                                 [static_cast<size_t>(k * 7 + q)];
                if (!check_unit(c, j - s + q * quarter, half, half))
                    return false;
            }
        }
    }
    for (pos_t k = 0; k < samples_.size(); ++k) {
        pos_t j = samples_.at(k);
        const pos_t leaf_half = B >> level_count_;
        pos_t lo = std::max<pos_t>(1, j - leaf_half);
        pos_t hi = std::min(b.n(), j + leaf_half - 1);
        if (window_lo_[static_cast<size_t>(k)] != lo) return false;
        const auto& w = window_chars_[static_cast<size_t>(k)];
        if (static_cast<pos_t>(w.size()) != hi - lo + 1) return false;
        for (pos_t x = lo; x <= hi; ++x)
            if (w[static_cast<size_t>(x - lo)] != b.text_at(x)) return false;
    }
    return true;
}

ExtractIndex::Parts ExtractIndex::to_parts() const {
    return {n_,           alpha_,        block_width_, level_count_,
            plain_,       plain_text_,   samples_.positions(),
            block_coords_, level_coords_, window_lo_,   window_chars_};
}

ExtractIndex ExtractIndex::from_parts(Parts p) {
    ExtractIndex e;
    e.n_ = p.n;
    e.alpha_ = p.alpha;
    e.block_width_ = p.block_width;
    e.level_count_ = p.level_count;
    e.plain_ = p.plain;
    e.plain_text_ = std::move(p.plain_text);
    e.samples_ = SampledSet::from_positions(std::move(p.sample_positions));
    e.block_coords_ = std::move(p.block_coords);
    e.level_coords_ = std::move(p.level_coords);
    e.window_lo_ = std::move(p.window_lo);
    e.window_chars_ = std::move(p.window_chars);
    return e;
}

}  // namespace rik
