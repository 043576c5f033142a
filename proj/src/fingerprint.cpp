/*
 * Hierarchical Karp-Rabin fingerprint index: construction, range queries,
 * collision audit, (de)serialization support.
 */
#include "rik/fingerprint.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <random>
#include <stdexcept>

namespace rik {

namespace {

// Map any integer onto [1, n] of the cyclic text.
pos_t canon(pos_t a, pos_t n) { return ((a - 1) % n + n) % n + 1; }

std::uint64_t gen_base(std::uint64_t seed, std::uint64_t q) {
    std::mt19937_64 g(seed);
    std::uniform_int_distribution<std::uint64_t> d(2, q - 2);
    return d(g);
}

// Prefix fingerprints and powers over the real text, plus evaluation of
// cyclic ranges (used at build and audit time only).
struct Eval {
    std::uint64_t q, base;
    std::vector<std::uint64_t> pref, pw;

    Eval(std::span<const sym_t> text, std::uint64_t q_, std::uint64_t base_)
        : q(q_), base(base_) {
        auto n = text.size();
        pref.resize(n + 1);
        pw.resize(n + 1);
        pref[0] = 0;
        pw[0] = 1 % q;
        for (std::size_t k = 0; k < n; ++k) {
            pref[k + 1] = (mul(pref[k], base) + text[k] % q) % q;
            pw[k + 1] = mul(pw[k], base);
        }
    }

    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>(
            static_cast<unsigned __int128>(a) * b % q);
    }

    // kappa(T[x..y]) over the real text, 1-based inclusive.
    std::uint64_t range(pos_t x, pos_t y) const {
        assert(x >= 1 && y + 1 >= x &&
               y < static_cast<pos_t>(pref.size()));
        if (y < x) return 0;
        std::uint64_t head = mul(pref[x - 1], pw[y - x + 1]);
        return (pref[y] + q - head) % q;
    }

    // kappa of len cyclic characters starting at real position start.
    std::uint64_t cyclic(pos_t start, pos_t len) const {
        if (len == 0) return 0;
        pos_t n = static_cast<pos_t>(pref.size()) - 1;
        assert(start >= 1 && start <= n && len <= n);
        pos_t end = start + len - 1;
        if (end <= n) return range(start, end);
        pos_t wrap = end - n;
        return (mul(range(start, n), pw[wrap]) + range(1, wrap)) % q;
    }
};

}  // namespace

std::uint64_t kappa_direct(std::span<const sym_t> s, std::uint64_t base,
                           std::uint64_t modulus) {
    std::uint64_t h = 0;
    for (sym_t c : s) {
        h = (static_cast<unsigned __int128>(h) * base + c % modulus) % modulus;
    }
    return h;
}

bool audit_collision_free(std::span<const sym_t> text, std::uint64_t base,
                          std::uint64_t modulus) {
    pos_t n = static_cast<pos_t>(text.size());
    if (n == 0) return true;
    Eval ev(text, modulus, base);

    // rk[i] is the equality class of text[i..i+len-1] (0-based starts).
    std::vector<std::int64_t> rk(n);
    for (pos_t i = 0; i < n; ++i) rk[i] = text[i];
    pos_t len = 1;
    for (;;) {
        std::unordered_map<std::uint64_t, std::int64_t> rep;
        rep.reserve(static_cast<std::size_t>(n));
        for (pos_t i = 0; i + len <= n; ++i) {
            std::uint64_t k = ev.range(i + 1, i + len);
            auto [it, inserted] = rep.try_emplace(k, rk[i]);
            if (!inserted && it->second != rk[i]) return false;
        }
        if (2 * len > n) return true;
        std::vector<std::pair<std::pair<std::int64_t, std::int64_t>, pos_t>> v;
        v.reserve(static_cast<std::size_t>(n - 2 * len + 1));
        for (pos_t i = 0; i + 2 * len <= n; ++i) {
            v.push_back({{rk[i], rk[i + len]}, i});
        }
        std::sort(v.begin(), v.end());
        std::vector<std::int64_t> next(n, -1);
        std::int64_t cls = -1;
        for (std::size_t t = 0; t < v.size(); ++t) {
            if (t == 0 || v[t].first != v[t - 1].first) ++cls;
            next[v[t].second] = cls;
        }
        rk.swap(next);
        len *= 2;
    }
}

std::uint64_t FingerprintIndex::mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b %
                                      q_);
}

std::uint64_t FingerprintIndex::add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= q_ ? s - q_ : s;
}

std::uint64_t FingerprintIndex::sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + q_ - b;
}

std::uint64_t FingerprintIndex::modpow(std::uint64_t x, std::uint64_t e) const {
    std::uint64_t res = 1 % q_;
    x %= q_;
    while (e > 0) {
        if (e & 1) res = mul(res, x);
        x = mul(x, x);
        e >>= 1;
    }
    return res;
}

std::uint64_t FingerprintIndex::pow_len(pos_t len) const {
    assert(len >= 0);
    if (len == 0) return 1 % q_;
    auto it = pow_cache_.find(len);
    if (it != pow_cache_.end()) return it->second;
    return modpow(base_, static_cast<std::uint64_t>(len));
}

std::uint64_t FingerprintIndex::inv_len(pos_t len) const {
    assert(len >= 0);
    if (len == 0) return 1 % q_;
    auto it = inv_cache_.find(len);
    if (it != inv_cache_.end()) return it->second;
    return modpow(inv_base_, static_cast<std::uint64_t>(len));
}

void FingerprintIndex::cache_length(pos_t len) {
    pow_cache_[len] = modpow(base_, static_cast<std::uint64_t>(len));
    inv_cache_[len] = modpow(inv_base_, static_cast<std::uint64_t>(len));
}

FingerprintIndex FingerprintIndex::build(const TextBundle& b,
                                         std::uint64_t seed, FpOptions opts) {
    RlfmIndex rlfm = RlfmIndex::build(b);
    ToeholdSampler toehold = ToeholdSampler::build(b);
    return build(b, rlfm, toehold, seed, opts);
}

FingerprintIndex FingerprintIndex::build(const TextBundle& b,
                                         const RlfmIndex& rlfm,
                                         const ToeholdSampler& toehold,
                                         std::uint64_t seed, FpOptions opts) {
    if (opts.modulus < 5) {
        throw std::invalid_argument("fingerprint modulus must be >= 5");
    }
    FingerprintIndex e;
    e.n_ = b.n();
    e.q_ = opts.modulus;
    e.block_width_ = ceil_pow2(ceil_div(e.n_, b.runs_count()));
    pos_t lc = 0;
    while ((e.block_width_ >> lc) > 1) ++lc;
    e.level_count_ = lc;
    e.samples_ = SampledSet::build(b, false);

    std::span<const sym_t> text(b.text());
    bool ok = false;
    int attempt = 0;
    for (; attempt <= opts.audit_max_retries; ++attempt) {
        e.seed_ = seed + static_cast<std::uint64_t>(attempt);
        e.base_ = gen_base(e.seed_, e.q_);
        if (e.n_ > opts.audit_threshold ||
            audit_collision_free(text, e.base_, e.q_)) {
            ok = true;
            break;
        }
    }
    if (!ok) {
        throw std::runtime_error(
            "fingerprint base collides on this text for every retried seed");
    }
    e.retries_ = attempt;
    e.inv_base_ = e.modpow(e.base_, e.q_ - 2);

    Eval ev(text, e.q_, e.base_);
    const pos_t n = e.n_, B = e.block_width_;
    const pos_t nb = ceil_div(n, B);

    e.prefix_kappa_.resize(nb);
    for (pos_t k = 1; k <= nb; ++k) {
        e.prefix_kappa_[k - 1] = ev.pref[std::min(k * B, n)];
    }

    // Content at virtual start a, width w, split at a sampled position by
    // an occurrence of the same string.
    auto make_unit = [&](pos_t a, pos_t w) {
        Unit u;
        u.kappa = ev.cyclic(canon(a, n), w);
        pos_t lo = canon(a, n);
        pos_t ovs, wit;
        if (lo + w - 1 <= n) {
            auto occ = find_primary_occurrence(b, rlfm, toehold, lo, lo + w - 1);
            ovs = occ.start;
            wit = occ.witness;
        } else {
            // The window wraps past the text end; the string is anchored at
            // itself, with the (always sampled) last position as witness.
            ovs = lo;
            wit = n;
        }
        assert(wit >= ovs && wit <= ovs + w - 1);
        pos_t ell1 = wit - ovs;
        u.split = w - ell1 + 1;
        u.sample_idx = e.samples_.index_of(wit);
        u.kappa_piece1 = ev.cyclic(ovs, ell1);
        u.kappa_piece2 = ev.cyclic(wit, w - ell1);
        return u;
    };

    e.block_units_.reserve(nb);
    for (pos_t k = 0; k < nb; ++k) {
        e.block_units_.push_back(make_unit(k * B + 1, B));
    }

    const pos_t sc = e.samples_.size();
    e.level_units_.resize(lc);
    for (pos_t l = 1; l <= lc; ++l) {
        pos_t s = B >> (l - 1), h = s >> 1;
        auto& units = e.level_units_[l - 1];
        units.reserve(static_cast<std::size_t>(4 * sc));
        for (pos_t idx = 0; idx < sc; ++idx) {
            pos_t j = e.samples_.at(idx);
            for (pos_t start : {j - s, j - s + h, j, j + h}) {
                units.push_back(make_unit(start, h));
            }
        }
    }

    e.char_kappa_.resize(sc);
    for (pos_t idx = 0; idx < sc; ++idx) {
        pos_t j = e.samples_.at(idx);
        e.char_kappa_[idx] = {b.text_at(canon(j - 1, n)) % e.q_,
                              b.text_at(j) % e.q_};
    }

    for (pos_t w = 1; w <= B; w <<= 1) e.cache_length(w);
    for (pos_t k = 2; k <= nb; ++k) e.cache_length(k * B);
    return e;
}

std::uint64_t FingerprintIndex::block_kappa(pos_t level, pos_t sample,
                                            int block) const {
    assert(level >= 1 && level <= level_count_ + 1);
    if (level == level_count_ + 1) {
        return char_kappa_[sample][block - 1];
    }
    pos_t h = block_width_ >> level;
    const Unit& u1 = unit_at(level, sample, block, 1);
    const Unit& u2 = unit_at(level, sample, block, 2);
    return add(mul(u1.kappa, pow_len(h)), u2.kappa);
}

const FingerprintIndex::Unit& FingerprintIndex::unit_at(pos_t level,
                                                        pos_t sample,
                                                        int block,
                                                        int half) const {
    assert(level >= 1 && level <= level_count_);
    return level_units_[level - 1]
                       [sample * 4 + (block - 1) * 2 + (half - 1)];
}

std::uint64_t FingerprintIndex::prefix_of_unit(const Unit& u, pos_t width,
                                               pos_t next_level, pos_t take,
                                               FpStats* st) const {
    assert(take >= 1 && take <= width);
    if (take == width) return u.kappa;
    ++st->hops;
    pos_t ell1 = width - u.split + 1;
    if (take >= ell1) {
        pos_t rest = take - ell1;
        std::uint64_t res = mul(u.kappa_piece1, pow_len(rest));
        if (rest > 0) {
            res = add(res,
                      prefix_of_block(next_level, u.sample_idx, 2, rest, st));
        }
        return res;
    }
    pos_t drop = ell1 - take;
    std::uint64_t tail = suffix_of_block(next_level, u.sample_idx, 1, drop, st);
    return mul(sub(u.kappa_piece1, tail), inv_len(drop));
}

std::uint64_t FingerprintIndex::suffix_of_unit(const Unit& u, pos_t width,
                                               pos_t next_level, pos_t take,
                                               FpStats* st) const {
    assert(take >= 1 && take <= width);
    if (take == width) return u.kappa;
    ++st->hops;
    pos_t piece2 = u.split - 1;
    if (take == piece2) return u.kappa_piece2;
    if (take < piece2) {
        std::uint64_t head =
            prefix_of_block(next_level, u.sample_idx, 2, piece2 - take, st);
        return sub(u.kappa_piece2, mul(head, pow_len(take)));
    }
    std::uint64_t head =
        suffix_of_block(next_level, u.sample_idx, 1, take - piece2, st);
    return add(mul(head, pow_len(piece2)), u.kappa_piece2);
}

std::uint64_t FingerprintIndex::prefix_of_block(pos_t level, pos_t sample,
                                                int block, pos_t take,
                                                FpStats* st) const {
    pos_t s = block_width_ >> (level - 1);
    assert(take >= 1 && take <= s);
    if (take == s) return block_kappa(level, sample, block);
    pos_t h = s >> 1;
    if (take <= h) {
        return prefix_of_unit(unit_at(level, sample, block, 1), h, level + 1,
                              take, st);
    }
    const Unit& u1 = unit_at(level, sample, block, 1);
    std::uint64_t rest = prefix_of_unit(unit_at(level, sample, block, 2), h,
                                        level + 1, take - h, st);
    return add(mul(u1.kappa, pow_len(take - h)), rest);
}

std::uint64_t FingerprintIndex::suffix_of_block(pos_t level, pos_t sample,
                                                int block, pos_t take,
                                                FpStats* st) const {
    pos_t s = block_width_ >> (level - 1);
    assert(take >= 1 && take <= s);
    if (take == s) return block_kappa(level, sample, block);
    pos_t h = s >> 1;
    if (take <= h) {
        return suffix_of_unit(unit_at(level, sample, block, 2), h, level + 1,
                              take, st);
    }
    std::uint64_t head = suffix_of_unit(unit_at(level, sample, block, 1), h,
                                        level + 1, take - h, st);
    return add(mul(head, pow_len(h)),
               unit_at(level, sample, block, 2).kappa);
}

std::uint64_t FingerprintIndex::window_kappa(pos_t level, pos_t sample,
                                             pos_t delta, pos_t len,
                                             FpStats* st) const {
    pos_t s = block_width_ >> (level - 1);
    assert(level >= 1 && level <= level_count_ + 1);
    assert(delta >= 0 && len >= 1 && delta + len <= 2 * s);
    if (delta < s && delta + len > s) {
        pos_t left = s - delta, right = len - left;
        std::uint64_t a = suffix_of_block(level, sample, 1, left, st);
        std::uint64_t c = prefix_of_block(level, sample, 2, right, st);
        return add(mul(a, pow_len(right)), c);
    }
    int block = delta < s ? 1 : 2;
    pos_t db = delta - (block - 1) * s;
    if (db == 0) return prefix_of_block(level, sample, block, len, st);
    if (db + len == s) return suffix_of_block(level, sample, block, len, st);
    // Strict interior of one block; s >= 2 here.
    pos_t h = s >> 1;
    if (db < h && db + len > h) {
        pos_t left = h - db, right = len - left;
        std::uint64_t a = suffix_of_unit(unit_at(level, sample, block, 1), h,
                                         level + 1, left, st);
        std::uint64_t c = prefix_of_unit(unit_at(level, sample, block, 2), h,
                                         level + 1, right, st);
        return add(mul(a, pow_len(right)), c);
    }
    int half = db < h ? 1 : 2;
    pos_t dh = db - (half - 1) * h;
    const Unit& u = unit_at(level, sample, block, half);
    if (dh == 0) return prefix_of_unit(u, h, level + 1, len, st);
    if (dh + len == h) return suffix_of_unit(u, h, level + 1, len, st);
    ++st->hops;
    return window_kappa(level + 1, u.sample_idx, (u.split - 1) + dh, len, st);
}

std::uint64_t FingerprintIndex::kappa_range(pos_t i, pos_t j,
                                            FpStats* stats) const {
    if (i < 1 || j > n_ || j + 1 < i) {
        throw std::out_of_range("fingerprint range outside the text");
    }
    FpStats local;
    FpStats* st = stats ? stats : &local;
    st->hops = 0;
    if (j < i) return 0;
    const pos_t B = block_width_;
    pos_t bi = (i - 1) / B + 1, bj = (j - 1) / B + 1;
    if (bi == bj) {
        pos_t bs = (bi - 1) * B + 1;
        pos_t delta = i - bs, len = j - i + 1;
        const Unit& u = block_units_[bi - 1];
        if (delta == 0 && len == B) return u.kappa;
        if (delta == 0) return prefix_of_unit(u, B, 1, len, st);
        if (delta + len == B) return suffix_of_unit(u, B, 1, len, st);
        ++st->hops;
        return window_kappa(1, u.sample_idx, (u.split - 1) + delta, len, st);
    }
    pos_t sfx = bi * B - i + 1;
    pos_t mid_len = (bj - 1) * B - bi * B;
    pos_t pre_len = j - (bj - 1) * B;
    std::uint64_t left = suffix_of_unit(block_units_[bi - 1], B, 1, sfx, st);
    std::uint64_t mid = sub(prefix_kappa_[bj - 2],
                            mul(prefix_kappa_[bi - 1], pow_len(mid_len)));
    std::uint64_t right = prefix_of_unit(block_units_[bj - 1], B, 1, pre_len,
                                         st);
    std::uint64_t res = mul(left, pow_len(mid_len + pre_len));
    res = add(res, mul(mid, pow_len(pre_len)));
    return add(res, right);
}

std::pair<std::uint64_t, std::uint64_t> FingerprintIndex::kappa_prime(
    pos_t i, pos_t j) const {
    if (i < 1 || j > n_ || j < i) {
        throw std::out_of_range("fingerprint range outside the text");
    }
    pos_t len = j - i + 1;
    pos_t t = static_cast<pos_t>(
        std::bit_floor(static_cast<std::uint64_t>(len)));
    return {kappa_range(i, i + t - 1), kappa_range(j - t + 1, j)};
}

bool FingerprintIndex::audit_structure(const TextBundle& b) const {
    if (b.n() != n_) return false;
    std::span<const sym_t> text(b.text());
    Eval ev(text, q_, base_);
    const pos_t n = n_, B = block_width_;
    const pos_t nb = ceil_div(n, B);
    if (static_cast<pos_t>(prefix_kappa_.size()) != nb) return false;
    for (pos_t k = 1; k <= nb; ++k) {
        if (prefix_kappa_[k - 1] != ev.pref[std::min(k * B, n)]) return false;
    }

    auto check_unit = [&](const Unit& u, pos_t a, pos_t w) {
        if (u.kappa != ev.cyclic(canon(a, n), w)) return false;
        if (u.split < 1 || u.split > w + 1) return false;
        if (u.sample_idx < 0 || u.sample_idx >= samples_.size()) return false;
        pos_t wit = samples_.at(u.sample_idx);
        pos_t ell1 = w - u.split + 1;
        pos_t ovs = wit - ell1;
        if (ovs < 1) return false;
        for (pos_t t = 0; t < w; ++t) {
            if (b.text_at(canon(a + t, n)) != b.text_at(canon(ovs + t, n))) {
                return false;
            }
        }
        if (u.kappa_piece1 != ev.cyclic(canon(ovs, n), ell1)) return false;
        if (u.kappa_piece2 != ev.cyclic(wit, w - ell1)) return false;
        std::uint64_t joined =
            add(mul(u.kappa_piece1, pow_len(w - ell1)), u.kappa_piece2);
        return joined == u.kappa;
    };

    if (static_cast<pos_t>(block_units_.size()) != nb) return false;
    for (pos_t k = 0; k < nb; ++k) {
        if (!check_unit(block_units_[k], k * B + 1, B)) return false;
    }
    if (static_cast<pos_t>(level_units_.size()) != level_count_) return false;
    const pos_t sc = samples_.size();
    for (pos_t l = 1; l <= level_count_; ++l) {
        pos_t s = B >> (l - 1), h = s >> 1;
        const auto& units = level_units_[l - 1];
        if (static_cast<pos_t>(units.size()) != 4 * sc) return false;
        for (pos_t idx = 0; idx < sc; ++idx) {
            pos_t j = samples_.at(idx);
            pos_t starts[4] = {j - s, j - s + h, j, j + h};
            for (int t = 0; t < 4; ++t) {
                if (!check_unit(units[idx * 4 + t], starts[t], h)) {
                    return false;
                }
            }
        }
    }
    if (static_cast<pos_t>(char_kappa_.size()) != sc) return false;
    for (pos_t idx = 0; idx < sc; ++idx) {
        pos_t j = samples_.at(idx);
        if (char_kappa_[idx][0] != b.text_at(canon(j - 1, n)) % q_) {
            return false;
        }
        if (char_kappa_[idx][1] != b.text_at(j) % q_) return false;
    }
    return true;
}

FingerprintIndex::Parts FingerprintIndex::to_parts() const {
    Parts p;
    p.n = n_;
    p.block_width = block_width_;
    p.level_count = level_count_;
    p.q = q_;
    p.base = base_;
    p.seed = seed_;
    p.sample_positions = samples_.positions();
    p.prefix_kappa = prefix_kappa_;
    p.block_units = block_units_;
    p.level_units = level_units_;
    p.char_kappa = char_kappa_;
    p.exp_lengths.reserve(pow_cache_.size());
    for (const auto& [len, unused] : pow_cache_) p.exp_lengths.push_back(len);
    std::sort(p.exp_lengths.begin(), p.exp_lengths.end());
    return p;
}

FingerprintIndex FingerprintIndex::from_parts(Parts p) {
    FingerprintIndex e;
    e.n_ = p.n;
    e.block_width_ = p.block_width;
    e.level_count_ = p.level_count;
    e.q_ = p.q;
    e.base_ = p.base;
    e.seed_ = p.seed;
    e.inv_base_ = e.modpow(e.base_, e.q_ - 2);
    e.samples_ = SampledSet::from_positions(std::move(p.sample_positions));
    e.prefix_kappa_ = std::move(p.prefix_kappa);
    e.block_units_ = std::move(p.block_units);
    e.level_units_ = std::move(p.level_units);
    e.char_kappa_ = std::move(p.char_kappa);
    for (pos_t len : p.exp_lengths) e.cache_length(len);
    return e;
}

}  // namespace rik
