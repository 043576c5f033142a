#include <doctest.h>

#include <random>

#include "rik/rlfm.hpp"
#include "test_util.hpp"

using namespace rik;

namespace {
pos_t brute_rank(const TextBundle& b, sym_t c, pos_t i) {
    pos_t r = 0;
    for (pos_t p = 1; p <= i; ++p) r += b.bwt_at(p) == c;
    return r;
}
}  // namespace

TEST_SUITE("rlfm") {

TEST_CASE("banana: cumulative symbol table and a spot rank") {
    TextBundle b = TextBundle::build(to_bytes("banana"));
    RlfmIndex rl = RlfmIndex::build(b);
    REQUIRE(rl.runs_count() == 5);
    // Symbols: 1 = terminator (x1), 2 = a (x3), 3 = b (x1), 4 = n (x2).
    CHECK(rl.c_table(1) == 0);
    CHECK(rl.c_table(2) == 1);
    CHECK(rl.c_table(3) == 4);
    CHECK(rl.c_table(4) == 5);
    CHECK(rl.c_table(5) == 7);
    CHECK(rl.rank(4, 7) == 2);
    CHECK(rl.rank(2, 7) == 3);
    CHECK(rl.rank(2, 0) == 0);
}

TEST_CASE("rank and access match the BWT for every symbol and prefix") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 8; ++t) {
        TextBundle b = TextBundle::build(
            testutil::repetitive_text(rng, testutil::sigma_choice(rng), 300));
        RlfmIndex rl = RlfmIndex::build(b);
        for (pos_t p = 1; p <= b.n(); ++p)
            CHECK(rl.access_bwt(p) == b.bwt_at(p));
        for (sym_t c = 1; c <= b.sigma(); ++c)
            for (pos_t i = 0; i <= b.n(); ++i)
                CHECK(rl.rank(c, i) == brute_rank(b, c, i));
        CHECK_THROWS_AS(rl.rank(0, 1), std::out_of_range);
        CHECK_THROWS_AS(rl.rank(static_cast<sym_t>(b.sigma() + 1), 1),
                        std::out_of_range);
    }
}

TEST_CASE("lf agrees with the suffix array definition") {
    std::mt19937_64 rng(12);
    TextBundle b = TextBundle::build(testutil::repetitive_text(rng, 4, 500));
    RlfmIndex rl = RlfmIndex::build(b);
    for (pos_t p = 1; p <= b.n(); ++p) {
        pos_t expect = b.sa_at(p) > 1 ? b.isa_at(b.sa_at(p) - 1)
                                      : b.isa_at(b.n());
        CHECK(rl.lf(p) == expect);
    }
}

TEST_CASE("run_span returns the enclosing run") {
    TextBundle b = TextBundle::build(to_bytes("banana"));
    RlfmIndex rl = RlfmIndex::build(b);
    auto span = rl.run_span(3);  // inside the nn run at [2,3]
    CHECK(span.start == 2);
    CHECK(span.end == 3);
    CHECK(span.symbol == b.bwt_at(2));
    auto first = rl.run_span(1);
    CHECK(first.start == 1);
    CHECK(first.end == 1);
}

TEST_CASE("count equals the direct scan, occurring and absent patterns") {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 12; ++t) {
        int sigma = testutil::sigma_choice(rng);
        byte_string raw = testutil::repetitive_text(rng, sigma, 600);
        TextBundle b = TextBundle::build(raw);
        RlfmIndex rl = RlfmIndex::build(b);
        for (int k = 0; k < 40; ++k) {
            pos_t len = 1 + static_cast<pos_t>(rng() % 12);
            byte_string pat =
                testutil::sample_pattern(rng, raw, len, k % 2 == 0, sigma);
            auto syms = b.alphabet().map_pattern(pat);
            pos_t want = static_cast<pos_t>(oracle_count(b, pat));
            if (!syms) {
                CHECK(want == 0);
                continue;
            }
            CHECK(rl.count(*syms) == want);
        }
    }
}

TEST_CASE("count uses exactly two predecessor queries per processed char") {
    std::mt19937_64 rng(14);
    int sigma = 4;
    byte_string raw = testutil::repetitive_text(rng, sigma, 800);
    TextBundle b = TextBundle::build(raw);
    RlfmIndex rl = RlfmIndex::build(b);
    for (int k = 0; k < 30; ++k) {
        pos_t len = 1 + static_cast<pos_t>(rng() % 12);
        byte_string pat =
            testutil::sample_pattern(rng, raw, len, k % 2 == 0, sigma);
        auto syms = b.alphabet().map_pattern(pat);
        if (!syms) continue;
        rl.reset_pred_query_count();
        pos_t cnt = static_cast<pos_t>(rl.count(*syms));
        pos_t m = static_cast<pos_t>(syms->size());
        if (cnt > 0) {
            // Occurring pattern: every character costs two rank queries.
            CHECK(rl.pred_query_count() == 2 * static_cast<std::uint64_t>(m));
            CHECK(rl.last_count_steps() == m);
        } else {
            // Absent: stops early, never exceeding the 2m budget.
            CHECK(rl.pred_query_count() <= 2 * static_cast<std::uint64_t>(m));
            CHECK(rl.pred_query_count() ==
                  2 * static_cast<std::uint64_t>(rl.last_count_steps()));
        }
    }
}

TEST_CASE("backward_step narrows ranges consistently with the oracle") {
    TextBundle b = TextBundle::build(to_bytes("banana"));
    RlfmIndex rl = RlfmIndex::build(b);
    sym_t a = b.alphabet().map('a'), n = b.alphabet().map('n');
    SaRange all{1, b.n()};
    SaRange ra = rl.backward_step(all, a);
    CHECK(ra == SaRange{2, 4});
    SaRange rna = rl.backward_step(ra, n);
    CHECK(rna == SaRange{6, 7});
    SaRange rana = rl.backward_step(rna, a);
    CHECK(rana == SaRange{3, 4});
    // A symbol with no occurrences left of the range empties it ("bb"
    // does not occur); empty ranges are returned, never stepped again.
    sym_t bb = b.alphabet().map('b');
    SaRange rb = rl.backward_step(all, bb);
    CHECK(rb == SaRange{5, 5});
    CHECK(rl.backward_step(rb, bb).empty());
}

TEST_CASE("assemble rebuilds an identical index from the run skeleton") {
    std::mt19937_64 rng(15);
    TextBundle b = TextBundle::build(testutil::repetitive_text(rng, 4, 400));
    RlfmIndex rl = RlfmIndex::build(b);
    RlfmIndex rl2 = RlfmIndex::assemble(
        rl.n(), rl.sigma(), rl.run_starts(), rl.run_symbols());
    for (pos_t p = 1; p <= b.n(); ++p) {
        CHECK(rl2.access_bwt(p) == rl.access_bwt(p));
        CHECK(rl2.lf(p) == rl.lf(p));
    }
    for (sym_t c = 1; c <= b.sigma(); ++c)
        CHECK(rl2.c_table(c) == rl.c_table(c));
}

}  // TEST_SUITE
