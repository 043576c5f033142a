/*
 * Macro scheme construction/decoding, greedy LZ parsing via per-phrase
 * Z-arrays, Fibonacci strings, statistics report.
 */
#include "rik/measures.hpp"

#include <algorithm>
#include <cassert>

namespace rik {

namespace {

// Z[k] = length of the longest common prefix of s and s[k..] (Z[0] = |s|).
std::vector<pos_t> z_array(std::span<const sym_t> s) {
    pos_t n = static_cast<pos_t>(s.size());
    std::vector<pos_t> z(n, 0);
    if (n == 0) return z;
    z[0] = n;
    pos_t l = 0, r = 0;
    for (pos_t k = 1; k < n; ++k) {
        if (k < r) z[k] = std::min(r - k, z[k - l]);
        while (k + z[k] < n && s[z[k]] == s[k + z[k]]) ++z[k];
        if (k + z[k] > r) {
            l = k;
            r = k + z[k];
        }
    }
    return z;
}

}  // namespace

MacroScheme MacroScheme::from_runs(const TextBundle& b) {
    std::vector<pos_t> starts;
    starts.reserve(b.runs().size());
    for (const auto& run : b.runs()) starts.push_back(b.sa_at(run.start));
    std::sort(starts.begin(), starts.end());
    assert(!starts.empty() && starts.front() == 1 && starts.back() == b.n());

    MacroScheme m;
    m.n_ = b.n();
    m.phrases_.reserve(starts.size());
    for (std::size_t i = 0; i < starts.size(); ++i) {
        pos_t start = starts[i];
        pos_t next = i + 1 < starts.size() ? starts[i + 1] : b.n() + 1;
        MacroPhrase ph;
        ph.start = start;
        ph.copy_len = next - 1 - start;
        ph.last = b.text_at(next - 1);
        if (ph.copy_len > 0) {
            // Within the phrase the suffix-array predecessor advances in
            // lockstep, so the whole copied part has one source.
            pos_t src = b.phi(start + 1) - 1;
            assert(src >= 1 && src + ph.copy_len - 1 <= b.n());
            ph.source = src;
        }
        m.phrases_.push_back(ph);
    }
    return m;
}

pos_t MacroScheme::directive_count_nonempty() const {
    pos_t c = phrase_count();
    for (const auto& ph : phrases_) {
        if (ph.copy_len > 0) ++c;
    }
    return c;
}

bool MacroScheme::validate() const {
    if (n_ < 1 || phrases_.empty()) return false;
    pos_t expect = 1;
    for (const auto& ph : phrases_) {
        if (ph.start != expect) return false;
        if (ph.copy_len < 0) return false;
        if (ph.last == 0) return false;
        if (ph.copy_len > 0 &&
            (ph.source < 1 || ph.source + ph.copy_len - 1 > n_)) {
            return false;
        }
        expect = ph.start + ph.copy_len + 1;
    }
    return expect == n_ + 1;
}

sym_string MacroScheme::reconstruct() const {
    if (!validate()) {
        throw invalid_scheme_error("macro scheme fails structural checks");
    }
    std::vector<pos_t> starts;
    starts.reserve(phrases_.size());
    for (const auto& ph : phrases_) starts.push_back(ph.start);

    // Where position x gets its character from: {0, c} when explicit in
    // some phrase, {src, 0} when copied.
    auto origin = [&](pos_t x) -> std::pair<pos_t, sym_t> {
        auto it = std::upper_bound(starts.begin(), starts.end(), x);
        const auto& ph = phrases_[it - starts.begin() - 1];
        pos_t off = x - ph.start;
        if (off == ph.copy_len) return {0, ph.last};
        return {ph.source + off, 0};
    };

    sym_string out(static_cast<std::size_t>(n_ + 1), 0);
    std::vector<std::uint8_t> state(static_cast<std::size_t>(n_ + 1), 0);
    std::vector<pos_t> chain;
    for (pos_t x = 1; x <= n_; ++x) {
        if (state[x] == 2) continue;
        chain.clear();
        pos_t cur = x;
        sym_t c = 0;
        for (;;) {
            if (state[cur] == 1) {
                throw invalid_scheme_error("macro scheme copies form a cycle");
            }
            if (state[cur] == 2) {
                c = out[cur];
                break;
            }
            auto [src, lit] = origin(cur);
            if (src == 0) {
                c = lit;
                out[cur] = c;
                state[cur] = 2;
                break;
            }
            state[cur] = 1;
            chain.push_back(cur);
            cur = src;
        }
        for (pos_t y : chain) {
            out[y] = c;
            state[y] = 2;
        }
    }
    return sym_string(out.begin() + 1, out.end());
}

std::vector<LzPhrase> lz_parse(std::span<const sym_t> text,
                               bool allow_overlap) {
    pos_t n = static_cast<pos_t>(text.size());
    std::vector<LzPhrase> out;
    pos_t i = 0;  // 0-based start of the current phrase
    std::vector<sym_t> cat;
    while (i < n) {
        pos_t best_len = 0, best_src = -1;
        if (i > 0) {
            pos_t rem = n - i;
            cat.clear();
            cat.reserve(static_cast<std::size_t>(rem + 1 + n));
            cat.insert(cat.end(), text.begin() + i, text.end());
            cat.push_back(0);  // separator below any symbol
            cat.insert(cat.end(), text.begin(), text.end());
            std::vector<pos_t> z = z_array(cat);
            for (pos_t j = 0; j < i; ++j) {
                pos_t len = z[rem + 1 + j];
                if (!allow_overlap) len = std::min(len, i - j);
                if (len > best_len) {
                    best_len = len;
                    best_src = j;
                }
            }
        }
        LzPhrase ph;
        ph.start = i + 1;
        if (best_len == 0) {
            ph.length = 1;
            ph.literal = text[i];
            i += 1;
        } else {
            ph.length = best_len;
            ph.source = best_src + 1;
            i += best_len;
        }
        out.push_back(ph);
    }
    return out;
}

sym_string lz_decode(pos_t n, const std::vector<LzPhrase>& phrases) {
    sym_string out;
    out.reserve(static_cast<std::size_t>(n));
    for (const auto& ph : phrases) {
        if (ph.start != static_cast<pos_t>(out.size()) + 1 || ph.length < 1) {
            throw invalid_scheme_error("parse phrases do not tile the text");
        }
        if (ph.source == 0) {
            if (ph.length != 1) {
                throw invalid_scheme_error("literal phrase longer than one");
            }
            out.push_back(ph.literal);
            continue;
        }
        if (ph.source >= ph.start) {
            throw invalid_scheme_error("phrase source does not start earlier");
        }
        for (pos_t t = 0; t < ph.length; ++t) {
            out.push_back(out[static_cast<std::size_t>(ph.source - 1 + t)]);
        }
    }
    if (static_cast<pos_t>(out.size()) != n) {
        throw invalid_scheme_error("parse does not cover the text");
    }
    return out;
}

byte_string fibonacci_text(int k, pos_t max_len) {
    if (k < 1) throw invalid_input_error("fibonacci index must be >= 1");
    byte_string prev = {std::uint8_t{'a'}};
    if (k == 1) return prev;
    byte_string cur = {std::uint8_t{'b'}};
    for (int i = 3; i <= k; ++i) {
        if (static_cast<pos_t>(cur.size() + prev.size()) > max_len) {
            throw invalid_input_error("fibonacci string exceeds length cap");
        }
        byte_string next = cur;
        next.insert(next.end(), prev.begin(), prev.end());
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

TextStats compute_stats(const TextBundle& b) {
    TextStats st;
    st.n = b.n();
    st.sigma = b.sigma();
    st.bwt_runs = b.runs_count();
    MacroScheme ms = MacroScheme::from_runs(b);
    st.macro_phrases = ms.phrase_count();
    st.macro_directives_raw = ms.directive_count();
    st.macro_directives = ms.directive_count_nonempty();
    st.z = static_cast<pos_t>(lz_parse(b.text(), true).size());
    st.z_no_overlap = static_cast<pos_t>(lz_parse(b.text(), false).size());
    return st;
}

}  // namespace rik
