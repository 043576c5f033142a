#include <doctest.h>

#include <random>

#include "rik/extract.hpp"
#include "test_util.hpp"

using namespace rik;

TEST_SUITE("extract") {

TEST_CASE("sampled set holds exactly the run-extreme text positions") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 8; ++t) {
        TextBundle b = TextBundle::build(
            testutil::repetitive_text(rng, testutil::sigma_choice(rng), 400));
        std::vector<pos_t> want;
        for (const auto& run : b.runs()) {
            for (pos_t q : {run.start, run.start + run.length - 1}) {
                pos_t v = b.sa_at(q);
                want.push_back(v > 1 ? v - 1 : b.n());
            }
        }
        std::sort(want.begin(), want.end());
        want.erase(std::unique(want.begin(), want.end()), want.end());
        SampledSet s = SampledSet::build(b);
        CHECK(s.positions() == want);
        for (pos_t p : want) CHECK(s.contains(p));
        CHECK(s.at(s.index_of(want.front())) == want.front());
    }
}

TEST_CASE("find_primary_occurrence returns a true occurrence with witness") {
    std::mt19937_64 rng(32);
    for (int t = 0; t < 8; ++t) {
        TextBundle b = TextBundle::build(
            testutil::repetitive_text(rng, testutil::sigma_choice(rng), 300));
        RlfmIndex rl = RlfmIndex::build(b);
        ToeholdSampler th = ToeholdSampler::build(b);
        SampledSet samples = SampledSet::build(b);
        for (int k = 0; k < 60; ++k) {
            pos_t lo = 1 + static_cast<pos_t>(
                               rng() % static_cast<std::uint64_t>(b.n()));
            pos_t hi = std::min(
                b.n(), lo + static_cast<pos_t>(rng() % 24));
            PrimaryOccurrence po = find_primary_occurrence(b, rl, th, lo, hi);
            pos_t len = hi - lo + 1;
            REQUIRE(po.start >= 1);
            REQUIRE(po.start + len - 1 <= b.n());
            for (pos_t j = 0; j < len; ++j)
                CHECK(b.text_at(po.start + j) == b.text_at(lo + j));
            CHECK(po.witness >= po.start);
            CHECK(po.witness <= po.start + len - 1);
            CHECK(samples.contains(po.witness));
            // The scanning oracle must also find one (existence).
            CHECK(scan_primary_occurrence(b, samples, lo, hi).has_value());
        }
    }
}

TEST_CASE("every window of small texts extracts exactly") {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 6; ++t) {
        TextBundle b = TextBundle::build(
            testutil::repetitive_text(rng, testutil::sigma_choice(rng), 256));
        for (pos_t alpha : {1, 4, 8}) {
            ExtractIndex ex = ExtractIndex::build(b, alpha);
            for (pos_t i = 1; i <= b.n(); ++i) {
                for (pos_t len = 0; len <= b.n() - i + 1; ++len) {
                    sym_string got = ex.extract(i, len);
                    REQUIRE(got.size() == static_cast<size_t>(len));
                    for (pos_t j = 0; j < len; ++j)
                        CHECK(got[static_cast<size_t>(j)] ==
                              b.text_at(i + j));
                }
            }
        }
    }
}

TEST_CASE("hop count per alpha-window stays within the bound") {
    std::mt19937_64 rng(34);
    byte_string raw = testutil::repetitive_text(rng, 2, 2000, 20);
    TextBundle b = TextBundle::build(raw);
    ExtractIndex ex = ExtractIndex::build(b, 4);
    if (!ex.plain()) {
        for (int k = 0; k < 200; ++k) {
            pos_t i = 1 + static_cast<pos_t>(
                              rng() % static_cast<std::uint64_t>(b.n()));
            pos_t len = std::min(b.n() - i + 1,
                                 static_cast<pos_t>(rng() % 40));
            ExtractStats st;
            sym_string got = ex.extract(i, len, &st);
            for (pos_t j = 0; j < len; ++j)
                CHECK(got[static_cast<size_t>(j)] == b.text_at(i + j));
            CHECK(st.max_window_hops <= ex.hop_bound());
        }
    }
}

TEST_CASE("audit approves a fresh build") {
    std::mt19937_64 rng(35);
    for (int t = 0; t < 5; ++t) {
        TextBundle b = TextBundle::build(
            testutil::repetitive_text(rng, testutil::sigma_choice(rng), 600));
        ExtractIndex ex = ExtractIndex::build(b, 8);
        CHECK(ex.audit(b));
    }
}

TEST_CASE("parts round-trip preserves behavior") {
    std::mt19937_64 rng(36);
    TextBundle b = TextBundle::build(testutil::repetitive_text(rng, 4, 500));
    ExtractIndex ex = ExtractIndex::build(b, 8);
    ExtractIndex ex2 = ExtractIndex::from_parts(ex.to_parts());
    CHECK(ex2.n() == ex.n());
    CHECK(ex2.block_width() == ex.block_width());
    for (int k = 0; k < 100; ++k) {
        pos_t i = 1 + static_cast<pos_t>(
                          rng() % static_cast<std::uint64_t>(b.n()));
        pos_t len =
            std::min(b.n() - i + 1, static_cast<pos_t>(rng() % 32));
        CHECK(ex2.extract(i, len) == ex.extract(i, len));
    }
}

TEST_CASE("window requests outside the text are rejected") {
    TextBundle b = TextBundle::build(to_bytes("banana"));
    ExtractIndex ex = ExtractIndex::build(b, 4);
    CHECK_THROWS_AS(ex.extract(0, 1), std::out_of_range);
    CHECK_THROWS_AS(ex.extract(1, -1), std::out_of_range);
    CHECK_THROWS_AS(ex.extract(7, 2), std::out_of_range);
    CHECK_THROWS_AS(ex.extract(8, 1), std::out_of_range);
    CHECK(ex.extract(7, 1) == sym_string{terminator_sym});
    CHECK(ex.extract(3, 0).empty());
    // An empty window starting one past the end is allowed, like an end
    // iterator.
    CHECK(ex.extract(8, 0).empty());
}

}  // TEST_SUITE
