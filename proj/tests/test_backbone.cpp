#include <doctest.h>

#include "netdyn/backbone.hpp"
#include "netdyn/error.hpp"
#include "support.hpp"

using namespace netdyn;

namespace {

// actor 0 holds weights (6, 2, 2) to actors 1..3, each of which has no other tie
WeightedNetwork star() {
    WeightedNetwork w(testing::letters(4), 2000);
    w.set_weight(0, 1, 6);
    w.set_weight(0, 2, 2);
    w.set_weight(0, 3, 2);
    return w;
}

}  // namespace

TEST_CASE("directed scores") {
    CHECK(directed_disparity_score(6, 10, 3) == doctest::Approx(0.16));
    CHECK(directed_disparity_score(2, 10, 3) == doctest::Approx(0.64));
    CHECK(directed_disparity_score(5, 10, 2) == doctest::Approx(0.5));
    CHECK(directed_disparity_score(7, 7, 1) == 1.0);
}

TEST_CASE("scores on the star") {
    const auto s = disparity_scores(star());
    CHECK(s.k[0] == 3);
    CHECK(s.s[0] == 10);
    CHECK(s.p_at(0, 1) == doctest::Approx(0.6));
    CHECK(s.p_at(1, 0) == doctest::Approx(1.0));
    // leaves have degree 1, so the hub's side decides
    CHECK(s.alpha_at(0, 1) == doctest::Approx(0.16));
    CHECK(s.alpha_at(1, 0) == doctest::Approx(0.16));
    CHECK(s.alpha_at(0, 2) == doctest::Approx(0.64));
    for (int i = 0; i < 4; ++i) {
        double row = 0.0;
        for (int j = 0; j < 4; ++j) row += s.p_at(i, j);
        CHECK(row == doctest::Approx(1.0));
    }
}

TEST_CASE("extraction") {
    const auto bb = extract_backbone(star(), 0.2);
    CHECK(bb.net.x.has(0, 1));
    CHECK_FALSE(bb.net.x.has(0, 2));
    CHECK_FALSE(bb.net.x.has(0, 3));
    CHECK(bb.positive_edges == 3);
    CHECK(bb.retained_edges == 1);
    CHECK(bb.trimming_fraction() == doctest::Approx(2.0 / 3.0));

    const WeightedNetwork empty(testing::letters(5), 2000);
    CHECK(extract_backbone(empty, 0.5).net.x.edge_count() == 0);
    CHECK(extract_backbone(empty, 0.5).trimming_fraction() == 0.0);

    CHECK_THROWS_AS(extract_backbone(star(), 0.0), ConfigError);
    CHECK_THROWS_AS(extract_backbone(star(), 1.5), ConfigError);
}

TEST_CASE("level one keeps every positive edge, tiny levels keep none") {
    Rng rng(21);
    for (int g = 0; g < 50; ++g) {
        const auto w = testing::heavy_tailed(testing::letters(15), rng, 0.4);
        const auto all = extract_backbone(w, 1.0);
        CHECK(all.retained_edges == w.positive_edge_count());
        CHECK(all.trimming_fraction() == 0.0);
        CHECK(extract_backbone(w, 1e-300).retained_edges == 0);
    }
}

TEST_CASE("agrees with the brute-force filter") {
    Rng rng(22);
    for (int g = 0; g < 100; ++g) {
        const int n = 2 + uniform_index(rng, 19);
        const auto w = testing::heavy_tailed(testing::letters(n), rng, 0.5);
        for (double level : {0.01, 0.05, 0.2, 0.5})
            REQUIRE(testing::to_matrix(extract_backbone(w, level).net.x) == testing::brute_backbone(w, level));
    }
}

TEST_CASE("raising a weight never raises its own directed score") {
    for (int k = 2; k < 8; ++k)
        for (std::int64_t rest = 1; rest < 30; rest += 3)
            for (std::int64_t w = 1; w < 40; ++w)
                REQUIRE(directed_disparity_score(w + 1, rest + w + 1, k) <= directed_disparity_score(w, rest + w, k));
}

TEST_CASE("alpha sweep retains a nonincreasing number of edges as the level falls") {
    Rng rng(23);
    const auto w = testing::heavy_tailed(testing::letters(20), rng, 0.6);
    const auto scores = disparity_scores(w);
    std::int64_t last = -1;
    for (double level : {0.5, 0.3, 0.2, 0.1, 0.05, 0.01}) {
        const auto kept = extract_backbone(w, scores, level).retained_edges;
        if (last >= 0) CHECK(kept <= last);
        last = kept;
    }
}

TEST_CASE("repeat extraction is identical") {
    Rng a(24), b(24);
    const auto wa = testing::heavy_tailed(testing::letters(18), a, 0.5);
    const auto wb = testing::heavy_tailed(testing::letters(18), b, 0.5);
    const auto x = extract_backbone(wa, 0.1), y = extract_backbone(wb, 0.1);
    CHECK(x.net == y.net);
    CHECK(x.trimming_fraction() == y.trimming_fraction());
}
