#include <doctest.h>

#include <cmath>
#include <numeric>

#include "netdyn/error.hpp"
#include "netdyn/panel.hpp"
#include "netdyn/rng.hpp"
#include "netdyn/simulator.hpp"
#include "support.hpp"

using namespace netdyn;

TEST_CASE("actor set sorts labels and rejects duplicates") {
    ActorSet a({"USA", "CHN", "NLD"});
    CHECK(a.size() == 3);
    CHECK(a.label(0) == "CHN");
    CHECK(a.label(2) == "USA");
    CHECK(a.index_of("NLD") == 1);
    CHECK_FALSE(a.contains("DEU"));
    CHECK(a == ActorSet({"NLD", "USA", "CHN"}));
    CHECK_THROWS_AS(ActorSet({"USA", "USA"}), ValidationError);
}

TEST_CASE("adjacency stays symmetric") {
    Adjacency x(5);
    x.set(1, 3, true);
    CHECK(x.has(3, 1));
    CHECK(x.edge_count() == 1);
    x.toggle(3, 1);
    CHECK_FALSE(x.has(1, 3));
    CHECK(x.edge_count() == 0);
    CHECK_THROWS_AS(x.set(2, 2, true), ValidationError);
}

TEST_CASE("degree sequence") {
    const auto actors4 = testing::letters(4);
    CHECK(degree_sequence(BinaryNetwork(actors4, 1)) == std::vector<int>{0, 0, 0, 0});
    const auto a3 = testing::letters(3);
    CHECK(degree_sequence(BinaryNetwork(a3, 1, testing::from_edges(3, {{0, 1}, {0, 2}, {1, 2}}))) ==
          std::vector<int>{2, 2, 2});
    CHECK(degree_sequence(BinaryNetwork(a3, 1, testing::from_edges(3, {{0, 1}, {1, 2}}))) == std::vector<int>{1, 2, 1});
}

TEST_CASE("density") {
    CHECK(std::round(density(166, 289) * 1000) / 1000 == doctest::Approx(0.021));
    CHECK(std::round(density(166, 1632) * 1000) / 1000 == doctest::Approx(0.119));
    CHECK(density(166, 0) == 0.0);
    CHECK(density(BinaryNetwork(testing::letters(3), 1, testing::from_edges(3, {{0, 1}, {0, 2}, {1, 2}}))) == 1.0);
    CHECK_THROWS_AS(density(BinaryNetwork(testing::letters(1), 1)), DegenerateInputError);
}

TEST_CASE("isolate count") {
    CHECK(isolate_count(BinaryNetwork(testing::letters(5), 1)) == 5);
    CHECK(isolate_count(BinaryNetwork(testing::letters(3), 1, testing::from_edges(3, {{0, 1}, {0, 2}, {1, 2}}))) == 0);
    CHECK(isolate_count(BinaryNetwork(testing::letters(166), 1, testing::from_edges(166, {{10, 20}}))) == 164);
}

TEST_CASE("density and degree sums agree with edge counts on random graphs") {
    Rng rng(11);
    for (int g = 0; g < 1000; ++g) {
        const int n = 2 + uniform_index(rng, 40);
        BinaryNetwork net(testing::letters(n), 1, random_graph(n, uniform01(rng), rng));
        const auto deg = degree_sequence(net);
        const auto e = edge_count(net);
        REQUIRE(std::accumulate(deg.begin(), deg.end(), std::int64_t{0}) == 2 * e);
        const double back = density(net) * n * (n - 1) / 2.0;
        REQUIRE(back == doctest::Approx(static_cast<double>(e)).epsilon(1e-15));
        REQUIRE(std::llround(back) == e);
    }
}

TEST_CASE("weighted network keeps symmetric nonnegative weights") {
    WeightedNetwork w(testing::letters(3), 2000);
    w.add_weight(0, 1, 2);
    w.add_weight(1, 0, 3);
    CHECK(w.weight(0, 1) == 5);
    CHECK(w.strength(1) == 5);
    CHECK(w.positive_degree(2) == 0);
    CHECK_THROWS_AS(w.set_weight(0, 2, -1), ValidationError);
    CHECK_THROWS_AS(w.set_weight(1, 1, 1), ValidationError);
    CHECK(support(w).x.has(1, 0));
}

TEST_CASE("actor covariate centering, range and missingness") {
    const double nan = std::nan("");
    // 3 actors x 2 periods, actor-major
    ActorCovariate c("afi", 3, 2, {0.2, 0.4, nan, 0.9, 0.5, 0.1});
    CHECK(c.missing(1, 0));
    CHECK(c.grand_mean() == doctest::Approx(0.42));
    CHECK(c.range() == doctest::Approx(0.8));
    CHECK(c.centered(1, 0) == 0.0);
    CHECK(c.imputed(1, 0) == doctest::Approx(0.42));
    CHECK(c.missing_fraction() == doctest::Approx(1.0 / 6.0));
    double sum = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int m = 0; m < 2; ++m)
            if (!c.missing(i, m)) sum += c.centered(i, m);
    CHECK(std::abs(sum) < 1e-12);

    ActorCovariate g("gdp", 2, 1, {0.0, std::exp(1.0) - 1.0}, Transform::log1p);
    CHECK(g.value(1, 0) == doctest::Approx(1.0));
    CHECK(g.value(0, 0) == 0.0);
}

TEST_CASE("centering is exact on random covariates") {
    Rng rng(12);
    for (int t = 0; t < 50; ++t) {
        const auto covs = testing::random_covariates(20, 5, rng, 0.2);
        const auto& c = covs.actor.front();
        double sum = 0.0;
        for (int i = 0; i < 20; ++i)
            for (int m = 0; m < 5; ++m)
                if (!c.missing(i, m)) sum += c.centered(i, m);
        REQUIRE(std::abs(sum) < 1e-12);
    }
}

TEST_CASE("dyadic covariate") {
    DyadCovariate d("dist", 3, {0, 1, 2, 1, 0, 3, 2, 3, 0});
    CHECK(d.mean() == doctest::Approx(2.0));
    CHECK(d.centered(1, 2) == doctest::Approx(1.0));
    CHECK_THROWS_AS(DyadCovariate("bad", 2, {0, 1, 2, 0}), ValidationError);
}
