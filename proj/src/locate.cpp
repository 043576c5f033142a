#include "rik/locate.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace rik {

// Text position of the BWT character at q: SA[q]-1, cyclically n when
// SA[q] = 1.
static pos_t bwt_char_text_pos(const TextBundle& b, pos_t q) {
    pos_t v = b.sa_at(q);
    return v > 1 ? v - 1 : b.n();
}

ToeholdSampler ToeholdSampler::build(const TextBundle& b) {
    std::vector<std::vector<std::pair<pos_t, pos_t>>> per_sym(b.sigma());
    for (const auto& run : b.runs()) {
        pos_t first = run.start, last = run.start + run.length - 1;
        auto& bucket = per_sym[static_cast<size_t>(run.symbol) - 1];
        bucket.emplace_back(first, bwt_char_text_pos(b, first));
        if (last != first)
            bucket.emplace_back(last, bwt_char_text_pos(b, last));
    }
    ToeholdSampler t;
    t.by_sym_.reserve(per_sym.size());
    for (auto& bucket : per_sym) {
        std::vector<pos_t> keys, payloads;
        keys.reserve(bucket.size());
        payloads.reserve(bucket.size());
        for (auto& [k, v] : bucket) {  // runs are scanned in order: sorted
            keys.push_back(k);
            payloads.push_back(v);
        }
        t.by_sym_.emplace_back(std::move(keys), std::move(payloads), b.n());
    }
    return t;
}

std::optional<PredSet<pos_t>::Hit> ToeholdSampler::pred(sym_t c,
                                                        pos_t x) const {
    if (c < 1 || c > sigma())
        throw std::out_of_range("toehold: symbol outside the alphabet");
    return by_sym_[static_cast<size_t>(c) - 1].pred(x);
}

std::optional<CountAnchorResult> count_and_anchor(
    const RlfmIndex& rlfm, const ToeholdSampler& toehold,
    std::span<const sym_t> pattern, const StepObserver& observer) {
    if (pattern.empty())
        throw std::invalid_argument("count_and_anchor: empty pattern");
    const auto m = static_cast<pos_t>(pattern.size());
    SaRange range{1, rlfm.n()};
    Anchor anchor;
    for (pos_t i = m; i >= 1; --i) {
        sym_t c = pattern[static_cast<size_t>(i - 1)];
        SaRange prev = range;
        if (i == m) {
            auto hit = toehold.pred(c, rlfm.n());
            range = rlfm.backward_step(range, c);
            if (range.empty()) return std::nullopt;
            assert(hit.has_value());
            anchor = {rlfm.lf(hit->key), hit->payload};
        } else if (rlfm.access_bwt(anchor.sa_pos) == c) {
            // The anchor's character extends the match: follow LF and the
            // suffix-array value drops by one (cyclically).
            range = rlfm.backward_step(range, c);
            if (range.empty()) return std::nullopt;
            anchor = {rlfm.lf(anchor.sa_pos),
                      anchor.sa_value > 1 ? anchor.sa_value - 1 : rlfm.n()};
        } else {
            // Some run of c ends inside [sp, ep] (the range is about to
            // stay non-empty only if c occurs in BWT[sp..ep], and then a
            // run border of c lies there); jump the anchor to it.
            range = rlfm.backward_step(range, c);
            if (range.empty()) return std::nullopt;
            auto hit = toehold.pred(c, prev.ep);
            assert(hit.has_value() && hit->key >= prev.sp);
            anchor = {rlfm.lf(hit->key), hit->payload};
        }
        assert(anchor.sa_pos >= range.sp && anchor.sa_pos <= range.ep);
        if (observer) observer(m - i + 1, range, anchor);
    }
    return CountAnchorResult{range, anchor};
}

PhraseTable PhraseTable::build(const TextBundle& b) {
    const pos_t n = b.n();
    // Collect q values: run borders, plus ISA[2] for the unconditional
    // phrase start at text position 1.
    std::map<pos_t, SaNeighbors> by_key;
    auto neighbors_of = [&](pos_t q) {
        SaNeighbors nb;
        nb.left = q > 1 ? b.sa_at(q - 1) : no_neighbor;
        nb.right = q < n ? b.sa_at(q + 1) : no_neighbor;
        return nb;
    };
    auto add = [&](pos_t q) { by_key[b.sa_at(q) - 1] = neighbors_of(q); };
    for (const auto& run : b.runs()) {
        add(run.start);
        add(run.start + run.length - 1);
    }
    if (n >= 2) add(b.isa_at(2));
    std::vector<pos_t> keys;
    std::vector<SaNeighbors> payloads;
    keys.reserve(by_key.size());
    payloads.reserve(by_key.size());
    for (auto& [k, v] : by_key) {
        keys.push_back(k);
        payloads.push_back(v);
    }
    PhraseTable t;
    t.starts_ = PredSet<SaNeighbors>(std::move(keys), std::move(payloads), n);
    return t;
}

SaNeighbors PhraseTable::neighbors(pos_t sa_value) const {
    pos_t k = sa_value - 1;
    auto hit = starts_.pred(k);
    assert(hit.has_value());  // key 0 is always present
    pos_t d = k - hit->key;
    SaNeighbors nb = hit->payload;
    // Neighbor values shift with the offset inside the phrase; sentinels
    // can only surface at d = 0 (the extremes of the suffix array always
    // fall on their own phrase keys).
    assert(d == 0 ||
           (nb.left != no_neighbor && nb.right != no_neighbor));
    if (nb.left != no_neighbor) nb.left += d;
    if (nb.right != no_neighbor) nb.right += d;
    return nb;
}

RunBorderSampler RunBorderSampler::build(const TextBundle& b, pos_t s) {
    if (s < 1) throw std::invalid_argument("sampler: radius must be >= 1");
    const pos_t n = b.n();
    // Run borders as gaps: border g sits between BWT[g] and BWT[g+1];
    // virtual borders at g = 0 and g = n.
    std::vector<pos_t> borders;
    borders.push_back(0);
    for (const auto& run : b.runs()) {
        pos_t end = run.start + run.length - 1;
        if (end < n) borders.push_back(end);
    }
    borders.push_back(n);

    // Sampled SA positions: within distance s after a border (forward
    // side) or at most s before one (backward side).
    std::vector<char> in_fwd(static_cast<size_t>(n) + 1, 0),
        in_bwd(static_cast<size_t>(n) + 1, 0);
    for (pos_t g : borders) {
        for (pos_t x = std::max<pos_t>(1, g - s + 1); x <= std::min(n, g); ++x)
            in_bwd[static_cast<size_t>(x)] = 1;  // border in [x, x+s-1]
        for (pos_t x = std::max<pos_t>(1, g + 1); x <= std::min(n, g + s); ++x)
            in_fwd[static_cast<size_t>(x)] = 1;  // border in [x-s, x-1]
    }
    RunBorderSampler rs;
    rs.s_ = s;
    std::vector<pos_t> sampled_pos;
    for (pos_t p = 1; p <= n; ++p) {
        if (!in_fwd[static_cast<size_t>(p)] && !in_bwd[static_cast<size_t>(p)])
            continue;
        sampled_pos.push_back(p);
        rs.sa_samples_.push_back(b.sa_at(p) - 1);
        rs.lcp_samples_.push_back(b.lcp_at(p));
    }
    // Forward reads key on rows with a break at distance <= s at or after
    // them (these rows see the break coming: a non-break row in a long run
    // must not be an anchor, so a pure run stretch is skipped by the
    // predecessor query in one step).  Backward reads key on rows with a
    // break strictly before them within distance s.  The terminator's
    // singleton run contributes key 0 to both sets, so a predecessor always
    // exists for any v >= 1.
    std::vector<pos_t> fwd_keys, fwd_payload, bwd_keys, bwd_payload;
    std::vector<std::pair<pos_t, pos_t>> fwd_pairs, bwd_pairs;
    for (size_t k = 0; k < sampled_pos.size(); ++k) {
        pos_t p = sampled_pos[k];
        pos_t w = rs.sa_samples_[k];
        if (in_bwd[static_cast<size_t>(p)])
            fwd_pairs.emplace_back(w, static_cast<pos_t>(k));
        if (in_fwd[static_cast<size_t>(p)])
            bwd_pairs.emplace_back(w, static_cast<pos_t>(k));
    }
    auto fill = [](std::vector<std::pair<pos_t, pos_t>>& pairs,
                   std::vector<pos_t>& keys, std::vector<pos_t>& payloads) {
        std::sort(pairs.begin(), pairs.end());
        for (auto& [k, v] : pairs) {
            keys.push_back(k);
            payloads.push_back(v);
        }
    };
    fill(fwd_pairs, fwd_keys, fwd_payload);
    fill(bwd_pairs, bwd_keys, bwd_payload);
    rs.fwd_ = PredSet<pos_t>(std::move(fwd_keys), std::move(fwd_payload), n);
    rs.bwd_ = PredSet<pos_t>(std::move(bwd_keys), std::move(bwd_payload), n);
    return rs;
}

RunBorderSampler RunBorderSampler::from_parts(pos_t s,
                                              std::vector<pos_t> sa_samples,
                                              std::vector<pos_t> lcp_samples,
                                              PredSet<pos_t> fwd,
                                              PredSet<pos_t> bwd) {
    RunBorderSampler rs;
    rs.s_ = s;
    rs.sa_samples_ = std::move(sa_samples);
    rs.lcp_samples_ = std::move(lcp_samples);
    rs.fwd_ = std::move(fwd);
    rs.bwd_ = std::move(bwd);
    return rs;
}

std::vector<pos_t> RunBorderSampler::sa_block_forward(pos_t v,
                                                      pos_t count) const {
    assert(count >= 1 && count <= s_);
    fetches_.fetch_add(1, std::memory_order_relaxed);
    // pred_strict(v) is the non-strict predecessor of v-1 in SA-minus-one
    // space, where both the keys and the stored samples live.
    auto hit = fwd_.pred_strict(v);
    assert(hit.has_value());  // key 0 is always present
    pos_t shift = v - 1 - hit->key;
    std::vector<pos_t> out;
    out.reserve(static_cast<size_t>(count));
    for (pos_t j = 1; j <= count; ++j) {
        auto k = static_cast<size_t>(hit->payload + j);
        assert(k < sa_samples_.size());
        out.push_back(sa_samples_[k] + shift + 1);  // back to SA values
    }
    return out;
}

std::vector<pos_t> RunBorderSampler::sa_block_backward(pos_t v,
                                                       pos_t count) const {
    assert(count >= 1 && count <= s_);
    fetches_.fetch_add(1, std::memory_order_relaxed);
    auto hit = bwd_.pred_strict(v);
    assert(hit.has_value());
    pos_t shift = v - 1 - hit->key;
    std::vector<pos_t> out;  // ascending SA positions p-count..p-1
    out.reserve(static_cast<size_t>(count));
    for (pos_t j = count; j >= 1; --j) {
        assert(hit->payload - j >= 0);
        auto k = static_cast<size_t>(hit->payload - j);
        out.push_back(sa_samples_[k] + shift + 1);
    }
    return out;
}

std::vector<pos_t> RunBorderSampler::lcp_block_right(pos_t v,
                                                     pos_t count) const {
    assert(count >= 1 && count <= s_);
    fetches_.fetch_add(1, std::memory_order_relaxed);
    auto hit = fwd_.pred_strict(v);
    assert(hit.has_value());
    pos_t delta = v - hit->key - 1;
    std::vector<pos_t> out;
    out.reserve(static_cast<size_t>(count));
    for (pos_t j = 1; j <= count; ++j) {
        auto k = static_cast<size_t>(hit->payload + j);
        assert(k < lcp_samples_.size());
        out.push_back(lcp_samples_[k] - delta);
    }
    return out;
}

std::vector<pos_t> RunBorderSampler::lcp_block_left(pos_t v,
                                                    pos_t count) const {
    assert(count >= 1 && count <= s_);
    fetches_.fetch_add(1, std::memory_order_relaxed);
    auto hit = bwd_.pred_strict(v);
    assert(hit.has_value());
    pos_t delta = v - hit->key - 1;
    std::vector<pos_t> out;  // LCP[p-count+1..p] ascending
    out.reserve(static_cast<size_t>(count));
    for (pos_t j = count - 1; j >= 0; --j) {
        auto k = static_cast<size_t>(hit->payload - j);
        out.push_back(lcp_samples_[k] - delta);
    }
    return out;
}

std::vector<pos_t> locate_all(const RlfmIndex& rlfm,
                              const ToeholdSampler& toehold,
                              const RunBorderSampler& sampler,
                              std::span<const sym_t> pattern) {
    auto res = count_and_anchor(rlfm, toehold, pattern);
    if (!res) return {};
    const auto [range, anchor] = *res;
    const pos_t s = sampler.radius();
    std::vector<pos_t> values(static_cast<size_t>(range.size()));
    values[static_cast<size_t>(anchor.sa_pos - range.sp)] = anchor.sa_value;
    pos_t v = anchor.sa_value;
    for (pos_t p = anchor.sa_pos; p < range.ep;) {
        pos_t chunk = std::min(s, range.ep - p);
        auto block = sampler.sa_block_forward(v, chunk);
        for (pos_t j = 0; j < chunk; ++j)
            values[static_cast<size_t>(p + 1 + j - range.sp)] =
                block[static_cast<size_t>(j)];
        p += chunk;
        v = block.back();
    }
    v = anchor.sa_value;
    for (pos_t p = anchor.sa_pos; p > range.sp;) {
        pos_t chunk = std::min(s, p - range.sp);
        auto block = sampler.sa_block_backward(v, chunk);
        for (pos_t j = 0; j < chunk; ++j)
            values[static_cast<size_t>(p - chunk + j - range.sp)] =
                block[static_cast<size_t>(j)];
        p -= chunk;
        v = block.front();
    }
    std::sort(values.begin(), values.end());
    return values;
}

}  // namespace rik
