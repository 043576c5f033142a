#include <doctest.h>

#include <random>

#include "rik/measures.hpp"
#include "test_util.hpp"

using namespace rik;

TEST_SUITE("measures") {

TEST_CASE("run-derived macro scheme reproduces banana") {
    TextBundle b = TextBundle::build(to_bytes("banana"));
    MacroScheme ms = MacroScheme::from_runs(b);
    CHECK(ms.phrase_count() == 5);  // one per BWT run
    CHECK(ms.directive_count() == 10);
    CHECK(ms.directive_count_nonempty() == 6);
    CHECK(ms.validate());
    CHECK(ms.reconstruct() == b.text());
}

TEST_CASE("macro scheme reproduces every random text within 2r directives") {
    std::mt19937_64 rng(51);
    for (int t = 0; t < 20; ++t) {
        TextBundle b = TextBundle::build(
            testutil::repetitive_text(rng, testutil::sigma_choice(rng), 800));
        MacroScheme ms = MacroScheme::from_runs(b);
        CHECK(ms.validate());
        CHECK(ms.reconstruct() == b.text());
        CHECK(ms.directive_count() <= 2 * b.runs_count());
        CHECK(ms.directive_count_nonempty() <= ms.directive_count());
    }
}

TEST_CASE("malformed schemes are rejected") {
    // Coverage gap: phrase starts at 1 with copy 1 + last = [1..2], next
    // phrase claims to start at 4.
    MacroScheme gap = MacroScheme::from_phrases(
        4, {{1, 1, 3, 2}, {4, 0, 0, 2}});
    CHECK(!gap.validate());
    CHECK_THROWS_AS(gap.reconstruct(), invalid_scheme_error);

    // Cycle: two phrases copying from inside each other.
    MacroScheme cyc = MacroScheme::from_phrases(
        4, {{1, 1, 3, 2}, {3, 1, 1, 2}});
    if (cyc.validate()) {
        // Position 1 copies from 3, position 3 copies from 1: unresolvable.
        CHECK_THROWS_AS(cyc.reconstruct(), invalid_scheme_error);
    }

    // Out-of-bounds source.
    MacroScheme oob = MacroScheme::from_phrases(2, {{1, 1, 9, 2}});
    CHECK(!oob.validate());
}

TEST_CASE("greedy parses of banana match hand-computed phrase counts") {
    TextBundle b = TextBundle::build(to_bytes("banana"));
    auto with = lz_parse(b.text(), true);
    auto without = lz_parse(b.text(), false);
    CHECK(with.size() == 5);     // b a n ana $
    CHECK(without.size() == 6);  // b a n an a $
    CHECK(lz_decode(b.n(), with) == b.text());
    CHECK(lz_decode(b.n(), without) == b.text());
    // The overlapping phrase: "ana" copied from position 2 onto 4.
    CHECK(with[3].start == 4);
    CHECK(with[3].length == 3);
    CHECK(with[3].source == 2);
}

TEST_CASE("greedy parses match the naive scanner on random texts") {
    std::mt19937_64 rng(52);
    for (int t = 0; t < 15; ++t) {
        TextBundle b = TextBundle::build(
            testutil::repetitive_text(rng, testutil::sigma_choice(rng), 400));
        for (bool overlap : {true, false}) {
            auto got = lz_parse(b.text(), overlap);
            auto want = testutil::naive_lz(b.text(), overlap);
            REQUIRE(got.size() == want.size());
            for (size_t i = 0; i < got.size(); ++i) {
                CHECK(got[i].start == want[i].start);
                CHECK(got[i].length == std::max<pos_t>(1, want[i].length));
                CHECK(got[i].source == want[i].source);
            }
            CHECK(lz_decode(b.n(), got) == b.text());
        }
    }
}

TEST_CASE("fibonacci strings: construction and growth") {
    CHECK(fibonacci_text(1) == to_bytes("a"));
    CHECK(fibonacci_text(2) == to_bytes("b"));
    CHECK(fibonacci_text(3) == to_bytes("ba"));
    CHECK(fibonacci_text(4) == to_bytes("bab"));
    CHECK(fibonacci_text(5) == to_bytes("babba"));
    CHECK(fibonacci_text(6) == to_bytes("babbabab"));
    // Lengths follow the Fibonacci recurrence.
    pos_t l1 = 1, l2 = 1;
    for (int k = 3; k <= 20; ++k) {
        pos_t lk = l1 + l2;
        CHECK(static_cast<pos_t>(fibonacci_text(k).size()) == lk);
        l1 = l2;
        l2 = lk;
    }
    CHECK_THROWS_AS(fibonacci_text(0), invalid_input_error);
    CHECK_THROWS_AS(fibonacci_text(40, 1000), invalid_input_error);
}

TEST_CASE("compute_stats bundles the individual measures") {
    TextBundle b = TextBundle::build(to_bytes("banana"));
    TextStats st = compute_stats(b);
    CHECK(st.n == 7);
    CHECK(st.sigma == 4);
    CHECK(st.bwt_runs == 5);
    CHECK(st.macro_phrases == 5);
    CHECK(st.macro_directives_raw == 10);
    CHECK(st.macro_directives == 6);
    CHECK(st.z == 5);
    CHECK(st.z_no_overlap == 6);
}

}  // TEST_SUITE
