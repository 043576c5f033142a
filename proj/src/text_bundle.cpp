#include "rik/text_bundle.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace rik {

AlphabetMap AlphabetMap::from_text(
    std::span<const std::uint8_t> text_with_term) {
    AlphabetMap m;
    std::array<bool, 256> seen{};
    for (auto b : text_with_term) seen[b] = true;
    assert(seen[terminator_byte]);
    m.to_byte_.push_back(terminator_byte);
    m.to_sym_[terminator_byte] = terminator_sym;
    for (int b = 0; b < 256; ++b) {
        if (b == terminator_byte || !seen[b]) continue;
        m.to_byte_.push_back(static_cast<std::uint8_t>(b));
        m.to_sym_[b] = static_cast<sym_t>(m.to_byte_.size());
    }
    return m;
}

std::optional<sym_string> AlphabetMap::map_pattern(
    std::span<const std::uint8_t> pattern) const {
    sym_string out;
    out.reserve(pattern.size());
    for (auto b : pattern) {
        sym_t s = map(b);
        // Reject bytes outside the alphabet and the terminator: user
        // patterns are matched against the text proper, never its sentinel.
        if (s <= 1) return std::nullopt;
        out.push_back(s);
    }
    return out;
}

byte_string AlphabetMap::unmap_string(std::span<const sym_t> syms) const {
    byte_string out;
    out.reserve(syms.size());
    for (auto s : syms) out.push_back(unmap(s));
    return out;
}

std::vector<pos_t> suffix_sort(std::span<const sym_t> text) {
    const auto n = static_cast<pos_t>(text.size());
    if (n == 0) return {};
    // 0-based internally; +1 on the way out.
    std::vector<pos_t> sa(n), rank(n), tmp(n), cnt;
    for (pos_t i = 0; i < n; ++i) {
        sa[i] = i;
        rank[i] = text[static_cast<size_t>(i)];
    }
    auto radix_pass = [&](const std::vector<pos_t>& src,
                          std::vector<pos_t>& dst, auto key, pos_t key_max) {
        cnt.assign(static_cast<size_t>(key_max) + 1, 0);
        for (pos_t i = 0; i < n; ++i) ++cnt[static_cast<size_t>(key(src[i]))];
        pos_t sum = 0;
        for (auto& c : cnt) {
            pos_t t = c;
            c = sum;
            sum += t;
        }
        for (pos_t i = 0; i < n; ++i)
            dst[static_cast<size_t>(cnt[static_cast<size_t>(key(src[i]))]++)] =
                src[i];
    };
    for (pos_t len = 1;; len <<= 1) {
        pos_t rank_max = *std::max_element(rank.begin(), rank.end());
        // Sort by (rank[i], rank[i+len]) with rank past the end treated as 0
        // (shorter suffix first): two stable counting-sort passes.
        auto second_key = [&](pos_t i) {
            return i + len < n ? rank[static_cast<size_t>(i + len)] : 0;
        };
        auto first_key = [&](pos_t i) { return rank[static_cast<size_t>(i)]; };
        radix_pass(sa, tmp, second_key, rank_max);
        radix_pass(tmp, sa, first_key, rank_max);
        tmp[static_cast<size_t>(sa[0])] = 1;
        for (pos_t i = 1; i < n; ++i) {
            bool same =
                first_key(sa[static_cast<size_t>(i)]) ==
                    first_key(sa[static_cast<size_t>(i - 1)]) &&
                second_key(sa[static_cast<size_t>(i)]) ==
                    second_key(sa[static_cast<size_t>(i - 1)]);
            tmp[static_cast<size_t>(sa[static_cast<size_t>(i)])] =
                tmp[static_cast<size_t>(sa[static_cast<size_t>(i - 1)])] +
                (same ? 0 : 1);
        }
        rank.swap(tmp);
        if (rank[static_cast<size_t>(sa[static_cast<size_t>(n - 1)])] == n)
            break;
    }
    for (auto& v : sa) ++v;
    return sa;
}

TextBundle TextBundle::build(std::span<const std::uint8_t> raw) {
    if (raw.empty()) throw invalid_input_error("build: input is empty");
    for (size_t i = 0; i + 1 < raw.size(); ++i) {
        if (raw[i] == terminator_byte)
            throw reserved_byte_error(
                "build: reserved terminator byte 0x00 occurs before the end "
                "of the input");
    }
    TextBundle b;
    byte_string owned(raw.begin(), raw.end());
    if (owned.back() != terminator_byte) owned.push_back(terminator_byte);
    b.alphabet_ = AlphabetMap::from_text(owned);
    b.text_.reserve(owned.size());
    for (auto byte : owned) b.text_.push_back(b.alphabet_.map(byte));
    b.n_ = static_cast<pos_t>(b.text_.size());
    const pos_t n = b.n_;

    b.sa_ = suffix_sort(b.text_);
    b.isa_.assign(static_cast<size_t>(n), 0);
    for (pos_t p = 1; p <= n; ++p)
        b.isa_[static_cast<size_t>(b.sa_at(p) - 1)] = p;

    // Kasai: walk positions in text order, reusing the previous lcp minus 1.
    b.lcp_.assign(static_cast<size_t>(n), 0);
    pos_t k = 0;
    for (pos_t i = 1; i <= n; ++i) {
        pos_t p = b.isa_at(i);
        if (p == 1) {
            k = 0;
            continue;
        }
        pos_t j = b.sa_at(p - 1);
        while (i + k <= n && j + k <= n && b.text_at(i + k) == b.text_at(j + k))
            ++k;
        b.lcp_[static_cast<size_t>(p - 1)] = k;
        if (k > 0) --k;
    }

    b.bwt_.reserve(static_cast<size_t>(n));
    for (pos_t p = 1; p <= n; ++p) {
        pos_t s = b.sa_at(p);
        b.bwt_.push_back(s > 1 ? b.text_at(s - 1) : b.text_at(n));
    }
    pos_t start = 1;
    for (pos_t p = 2; p <= n + 1; ++p) {
        if (p == n + 1 || b.bwt_at(p) != b.bwt_at(start)) {
            b.runs_.push_back({start, p - start, b.bwt_at(start)});
            start = p;
        }
    }
    return b;
}

pos_t TextBundle::phi(pos_t i) const {
    assert(i >= 1 && i <= n_);
    pos_t p = isa_at(i);
    return p > 1 ? sa_at(p - 1) : sa_at(n_);
}

std::int64_t oracle_count_syms(const TextBundle& b,
                               std::span<const sym_t> pattern) {
    if (pattern.empty())
        throw std::invalid_argument("oracle_count: empty pattern");
    const pos_t n = b.n();
    const auto m = static_cast<pos_t>(pattern.size());
    std::int64_t c = 0;
    for (pos_t i = 1; i + m - 1 <= n; ++i) {
        pos_t j = 0;
        while (j < m && b.text_at(i + j) == pattern[static_cast<size_t>(j)])
            ++j;
        if (j == m) ++c;
    }
    return c;
}

std::vector<pos_t> oracle_locate_syms(const TextBundle& b,
                                      std::span<const sym_t> pattern) {
    if (pattern.empty())
        throw std::invalid_argument("oracle_locate: empty pattern");
    const pos_t n = b.n();
    const auto m = static_cast<pos_t>(pattern.size());
    std::vector<pos_t> out;
    for (pos_t i = 1; i + m - 1 <= n; ++i) {
        pos_t j = 0;
        while (j < m && b.text_at(i + j) == pattern[static_cast<size_t>(j)])
            ++j;
        if (j == m) out.push_back(i);
    }
    return out;
}

std::int64_t oracle_count(const TextBundle& b,
                          std::span<const std::uint8_t> pattern) {
    if (pattern.empty())
        throw std::invalid_argument("oracle_count: empty pattern");
    auto syms = b.alphabet().map_pattern(pattern);
    if (!syms) return 0;
    return oracle_count_syms(b, *syms);
}

std::vector<pos_t> oracle_locate(const TextBundle& b,
                                 std::span<const std::uint8_t> pattern) {
    if (pattern.empty())
        throw std::invalid_argument("oracle_locate: empty pattern");
    auto syms = b.alphabet().map_pattern(pattern);
    if (!syms) return {};
    return oracle_locate_syms(b, *syms);
}

std::int64_t distinct_kmer_count(const TextBundle& b, pos_t k) {
    assert(k >= 1);
    std::int64_t c = 0;
    for (pos_t p = 1; p <= b.n(); ++p) {
        if (b.sa_at(p) + k - 1 > b.n()) continue;  // suffix too short
        if (b.lcp_at(p) < k) ++c;  // first suffix carrying this k-mer
    }
    return c;
}

}  // namespace rik
