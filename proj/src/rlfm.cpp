#include "rik/rlfm.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace rik {

RlfmIndex RlfmIndex::assemble(pos_t n, sym_t sigma,
                              std::vector<pos_t> run_starts,
                              sym_string run_symbols) {
    assert(run_starts.size() == run_symbols.size());
    assert(!run_starts.empty() && run_starts.front() == 1);
    RlfmIndex idx;
    idx.n_ = n;
    idx.sigma_ = sigma;
    idx.r_ = static_cast<pos_t>(run_starts.size());
    const pos_t r = idx.r_;

    auto run_len = [&](pos_t k) {  // k: 0-based run index
        pos_t end = (k + 1 < r) ? run_starts[static_cast<size_t>(k) + 1]
                                : n + 1;
        return end - run_starts[static_cast<size_t>(k)];
    };

    idx.same_sym_before_.assign(static_cast<size_t>(r), 0);
    idx.by_sym_.assign(static_cast<size_t>(sigma) + 1, {});
    std::vector<pos_t> occ_so_far(static_cast<size_t>(sigma) + 1, 0);
    std::vector<pos_t> total_occ(static_cast<size_t>(sigma) + 1, 0);
    for (pos_t k = 0; k < r; ++k) {
        sym_t c = run_symbols[static_cast<size_t>(k)];
        assert(c >= 1 && c <= sigma);
        idx.same_sym_before_[static_cast<size_t>(k)] = occ_so_far[c];
        idx.by_sym_[c].push_back(k + 1);
        occ_so_far[c] += run_len(k);
        total_occ[c] += run_len(k);
    }

    idx.c_.assign(static_cast<size_t>(sigma) + 1, 0);
    for (sym_t c = 2; c <= sigma + 1; ++c)
        idx.c_[static_cast<size_t>(c) - 1] =
            idx.c_[static_cast<size_t>(c) - 2] + total_occ[c - 1];

    idx.runs_before_sym_.assign(static_cast<size_t>(sigma) + 1, 0);
    for (sym_t c = 2; c <= sigma + 1; ++c)
        idx.runs_before_sym_[static_cast<size_t>(c) - 1] =
            idx.runs_before_sym_[static_cast<size_t>(c) - 2] +
            static_cast<pos_t>(idx.by_sym_[c - 1].size());

    // Cumulative run lengths with runs stably bucketed by symbol.
    idx.len_cumulative_.assign(static_cast<size_t>(r) + 1, 0);
    {
        size_t at = 1;
        for (sym_t c = 1; c <= sigma; ++c) {
            for (pos_t k1 : idx.by_sym_[c]) {
                idx.len_cumulative_[at] =
                    idx.len_cumulative_[at - 1] + run_len(k1 - 1);
                ++at;
            }
        }
        assert(at == static_cast<size_t>(r) + 1);
        assert(idx.len_cumulative_.back() == n);
    }

    std::vector<pos_t> payload(static_cast<size_t>(r));
    for (pos_t k = 0; k < r; ++k) payload[static_cast<size_t>(k)] = k + 1;
    idx.run_starts_ =
        PredSet<pos_t>(std::move(run_starts), std::move(payload), n);
    idx.run_symbols_ = std::move(run_symbols);
    return idx;
}

RlfmIndex::RunHit RlfmIndex::run_of(pos_t p) const {
    auto hit = run_starts_.pred(p);
    assert(hit.has_value());
    return {hit->payload, hit->key};
}

sym_t RlfmIndex::access_bwt(pos_t p) const {
    if (p < 1 || p > n_)
        throw std::out_of_range("access_bwt: position out of range");
    return run_symbols_[static_cast<size_t>(run_of(p).run_index) - 1];
}

RlfmIndex::RunSpan RlfmIndex::run_span(pos_t p) const {
    if (p < 1 || p > n_)
        throw std::out_of_range("run_span: position out of range");
    auto run = run_of(p);
    pos_t end = run.run_index < r_
                    ? run_starts_.keys()[static_cast<size_t>(run.run_index)] - 1
                    : n_;
    return {run.start, end, run_symbols_[static_cast<size_t>(run.run_index) - 1]};
}

pos_t RlfmIndex::rank(sym_t c, pos_t i) const {
    if (c < 1 || c > sigma_)
        throw std::out_of_range("rank: symbol outside the effective alphabet");
    if (i < 0 || i > n_)
        throw std::out_of_range("rank: position out of range");
    // One predecessor query even for i = 0 so the query count per call is
    // exactly one.
    auto hit = run_starts_.pred(i);
    const auto& list = by_sym_[c];
    if (!hit) return 0;  // i = 0
    pos_t k = hit->payload;
    // Runs of symbol c strictly before run k, then their total length.
    auto it = std::lower_bound(list.begin(), list.end(), k);
    auto full = static_cast<pos_t>(it - list.begin());
    pos_t base = runs_before_sym_[static_cast<size_t>(c) - 1];
    pos_t whole =
        len_cumulative_[static_cast<size_t>(base + full)] -
        len_cumulative_[static_cast<size_t>(base)];
    pos_t partial =
        (run_symbols_[static_cast<size_t>(k) - 1] == c) ? i - hit->key + 1 : 0;
    return whole + partial;
}

pos_t RlfmIndex::lf(pos_t p) const {
    if (p < 1 || p > n_) throw std::out_of_range("lf: position out of range");
    auto run = run_of(p);
    sym_t c = run_symbols_[static_cast<size_t>(run.run_index) - 1];
    return c_table(c) + same_sym_before_[static_cast<size_t>(run.run_index) - 1]
           + (p - run.start + 1);
}

SaRange RlfmIndex::backward_step(const SaRange& range, sym_t c) const {
    assert(!range.empty() && range.sp >= 1 && range.ep <= n_);
    pos_t sp = c_table(c) + rank(c, range.sp - 1) + 1;
    pos_t ep = c_table(c) + rank(c, range.ep);
    return {sp, ep};
}

std::int64_t RlfmIndex::count(std::span<const sym_t> pattern) const {
    if (pattern.empty()) throw std::invalid_argument("count: empty pattern");
    SaRange range{1, n_};
    last_steps_ = 0;
    for (auto it = pattern.rbegin(); it != pattern.rend(); ++it) {
        range = backward_step(range, *it);
        ++last_steps_;
        if (range.empty()) return 0;
    }
    return range.size();
}

}  // namespace rik
