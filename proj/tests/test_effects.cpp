#include <doctest.h>

#include <cmath>

#include "netdyn/effects.hpp"
#include "netdyn/error.hpp"
#include "netdyn/simulator.hpp"
#include "support.hpp"

using namespace netdyn;

namespace {

Adjacency k3() { return testing::from_edges(3, {{0, 1}, {0, 2}, {1, 2}}); }

}  // namespace

TEST_CASE("effect names and specs") {
    CHECK(parse_effect_kind("degree") == EffectKind::density);
    CHECK(parse_effect_kind("coDyadvar") == EffectKind::dyadX);
    CHECK(parse_effect_kind("egoPlusAtlX") == EffectKind::egoPlusAltX);
    CHECK(parse_effect_kind("degplus") == EffectKind::degPlus);
    CHECK_THROWS_AS(parse_effect_kind("reciprocity"), ConfigError);
    const auto e = parse_effect_spec("simX(afi)");
    CHECK(e.kind == EffectKind::simX);
    CHECK(e.covariate == "afi");
    CHECK(parse_effect_spec("egoPlusAltX:gdp").label() == "egoPlusAltX(gdp)");
    CHECK_THROWS_AS(parse_effect_spec("simX"), ConfigError);
    CHECK_THROWS_AS(parse_effect_spec("density:afi"), ConfigError);
    CHECK(parse_tie_rule("pairwise-conjunctive") == TieRule::pairwise_conjunctive);
}

TEST_CASE("density statistic on K3") {
    const BinaryNetwork net(testing::letters(3), 1, k3());
    const auto s = statistic(EffectSpec{EffectKind::density}, net, {});
    CHECK(s.total == 6.0);
    CHECK(s.per_actor == std::vector<double>{2.0, 2.0, 2.0});
}

TEST_CASE("gwesp weights") {
    CHECK(gwesp_weight(std::log(2.0), 0) == doctest::Approx(0.0));
    CHECK(gwesp_weight(std::log(2.0), 1) == doctest::Approx(1.0));
    CHECK(gwesp_weight(std::log(2.0), 2) == doctest::Approx(1.5));
    CHECK(gwesp_weight(std::log(2.0), 3) == doctest::Approx(1.75));
    for (int k = 0; k < 20; ++k) CHECK(gwesp_weight(0.7, k + 1) >= gwesp_weight(0.7, k));
    // triangle-free: a 4-cycle has no shared partner on any edge
    const BinaryNetwork c4(testing::letters(4), 1, testing::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}));
    CHECK(statistic(EffectSpec{EffectKind::gwesp}, c4, {}).total == 0.0);
    const BinaryNetwork tri(testing::letters(3), 1, k3());
    CHECK(statistic(EffectSpec{EffectKind::gwesp}, tri, {}).total == doctest::Approx(6.0));
}

TEST_CASE("similarity") {
    CovariateSet covs;
    covs.actor.emplace_back("v", 3, 1, std::vector<double>{0.2, 0.7, 1.2});
    const EffectContext ctx({EffectSpec{EffectKind::simX, "v"}}, covs, 3);
    // range 1: sim(0,1) = 0.5, sim(1,2) = 0.5, sim(0,2) = 0; mean 1/3
    CHECK(ctx.centered_similarity(0, 0, 1, 0) == doctest::Approx(0.5 - 1.0 / 3.0));
    CHECK(ctx.centered_similarity(0, 0, 2, 0) == doctest::Approx(-1.0 / 3.0));

    CovariateSet same;
    same.actor.emplace_back("v", 2, 1, std::vector<double>{0.0, 1.0});
    const EffectContext two({EffectSpec{EffectKind::simX, "v"}}, same, 2);
    CHECK(two.centered_similarity(0, 0, 0, 0) == doctest::Approx(1.0));

    CovariateSet flat;
    flat.actor.emplace_back("v", 3, 1, std::vector<double>{0.5, 0.5, 0.5});
    CHECK_THROWS_AS(EffectContext({EffectSpec{EffectKind::simX, "v"}}, flat, 3), ConfigError);
}

TEST_CASE("similarity is invariant under affine rescaling of the covariate") {
    Rng rng(31);
    std::vector<double> raw(12), scaled(12);
    for (std::size_t k = 0; k < raw.size(); ++k) {
        raw[k] = uniform01(rng);
        scaled[k] = 3.0 * raw[k] - 7.0;
    }
    CovariateSet a, b;
    a.actor.emplace_back("v", 6, 2, raw);
    b.actor.emplace_back("v", 6, 2, scaled);
    const EffectContext ca({EffectSpec{EffectKind::simX, "v"}}, a, 6), cb({EffectSpec{EffectKind::simX, "v"}}, b, 6);
    for (int m = 0; m < 2; ++m)
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                if (i != j) CHECK(ca.centered_similarity(0, i, j, m) == doctest::Approx(cb.centered_similarity(0, i, j, m)));
}

TEST_CASE("change statistics match full recomputation for every effect") {
    Rng rng(32);
    const auto specs = testing::every_effect();
    for (int g = 0; g < 60; ++g) {
        const int n = 3 + uniform_index(rng, 10);
        const auto covs = testing::random_covariates(n, 2, rng);
        const EffectContext ctx(specs, covs, n);
        const auto x = random_graph(n, uniform01(rng), rng);
        const auto base = testing::to_matrix(x);
        for (int k = 0; k < ctx.size(); ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (i == j) continue;
                    auto flip = base;
                    flip[i][j] = flip[j][i] = 1 - flip[i][j];
                    const double oracle = testing::brute_actor_statistic(specs[k], flip, i, covs, 1) -
                                          testing::brute_actor_statistic(specs[k], base, i, covs, 1);
                    REQUIRE(std::abs(ctx.change(k, x, i, j, 1) - oracle) < 1e-10);
                }
    }
}

TEST_CASE("per-actor statistics match the defining formulas") {
    Rng rng(33);
    const auto specs = testing::every_effect();
    const int n = 9;
    const auto covs = testing::random_covariates(n, 2, rng);
    const EffectContext ctx(specs, covs, n);
    const auto x = random_graph(n, 0.4, rng);
    const auto mat = testing::to_matrix(x);
    for (int k = 0; k < ctx.size(); ++k) {
        const auto s = ctx.actor_statistics(k, x, 0);
        for (int i = 0; i < n; ++i) CHECK(s[i] == doctest::Approx(testing::brute_actor_statistic(specs[k], mat, i, covs, 0)));
    }
}

TEST_CASE("simple change values") {
    const BinaryNetwork empty(testing::letters(4), 1);
    CHECK(change_statistic(EffectSpec{EffectKind::density}, empty, 0, 1, {}) == 1.0);
    CHECK_THROWS_AS(change_statistic(EffectSpec{EffectKind::density}, empty, 2, 2, {}), std::domain_error);

    CovariateSet covs;
    covs.actor.emplace_back("v", 4, 1, std::vector<double>{0.0, 0.25, 0.5, 1.0});
    const EffectContext ctx({EffectSpec{EffectKind::simX, "v"}}, covs, 4);
    const double expected = ctx.centered_similarity(0, 0, 2, 0);
    CHECK(change_statistic(EffectSpec{EffectKind::simX, "v"}, empty, 0, 2, covs) == doctest::Approx(expected));
    const BinaryNetwork with(testing::letters(4), 1, testing::from_edges(4, {{0, 2}}));
    CHECK(change_statistic(EffectSpec{EffectKind::simX, "v"}, with, 0, 2, covs) == doctest::Approx(-expected));
}

TEST_CASE("linear covariate change differences depend only on alter values") {
    CovariateSet covs;
    covs.actor.emplace_back("v", 5, 1, std::vector<double>{1.0, 2.0, 4.0, 8.0, 16.0});
    CovariateSet shifted;
    shifted.actor.emplace_back("v", 5, 1, std::vector<double>{11.0, 12.0, 14.0, 18.0, 26.0});
    const EffectSpec e{EffectKind::egoPlusAltX, "v"};
    const BinaryNetwork empty(testing::letters(5), 1);
    for (int j = 1; j < 5; ++j)
        for (int h = 1; h < 5; ++h) {
            const double d1 = change_statistic(e, empty, 0, j, covs) - change_statistic(e, empty, 0, h, covs);
            const double d2 = change_statistic(e, empty, 0, j, shifted) - change_statistic(e, empty, 0, h, shifted);
            CHECK(d1 == doctest::Approx(d2));
        }
}

TEST_CASE("missing covariate handling") {
    const double nan = std::nan("");
    CovariateSet covs;
    covs.actor.emplace_back("v", 4, 1, std::vector<double>{0.0, nan, 1.0, 5.0});
    const BinaryNetwork net(testing::letters(4), 1, testing::from_edges(4, {{0, 1}, {0, 2}, {2, 3}}));
    // centered values (-2, 0, -1, 3); the missing actor imputes to 0
    const EffectSpec e{EffectKind::egoPlusAltX, "v"};
    CHECK(statistic(e, net, covs, 0, MissingPolicy::impute).total == doctest::Approx(2 * (-2.0 - 3.0 + 2.0)));
    CHECK(statistic(e, net, covs, 0, MissingPolicy::exclude).total == doctest::Approx(2 * (-3.0 + 2.0)));
    const EffectSpec sq{EffectKind::egoPlusAltSqX, "v"};
    CHECK(statistic(sq, net, covs, 0, MissingPolicy::impute).total == doctest::Approx(2 * (4.0 + 9.0 + 4.0)));
    CHECK(statistic(sq, net, covs, 0, MissingPolicy::exclude).total == doctest::Approx(2 * (9.0 + 4.0)));

    CovariateSet none;
    CHECK_THROWS_AS(EffectContext({e}, none, 4), ConfigError);
}

TEST_CASE("target statistics") {
    Rng rng(34);
    const auto actors = testing::letters(8);
    BinaryNetSeries two{BinaryNetwork(actors, 1, random_graph(8, 0.3, rng)), BinaryNetwork(actors, 2, random_graph(8, 0.3, rng))};
    const EffectContext dens({EffectSpec{EffectKind::density}}, {}, 8);
    CHECK(target_statistics(two, dens)[0] == 2.0 * static_cast<double>(two[1].x.edge_count()));

    const auto covs = testing::random_covariates(8, 3, rng, 0.0);
    const auto specs = testing::every_effect();
    const EffectContext ctx(specs, covs, 8);
    BinaryNetSeries three{two[0], two[1], BinaryNetwork(actors, 3, random_graph(8, 0.5, rng))};
    const auto t = target_statistics(three, ctx);
    for (int k = 0; k < ctx.size(); ++k) {
        double oracle = 0.0;
        for (int m = 0; m < 2; ++m) {
            const auto mat = testing::to_matrix(three[m + 1].x);
            for (int i = 0; i < 8; ++i) oracle += testing::brute_actor_statistic(specs[k], mat, i, covs, m);
        }
        CHECK(t[k] == doctest::Approx(oracle));
    }

    BinaryNetSeries flat{two[0], two[0], two[0]};
    const auto tf = target_statistics(flat, ctx);
    for (int k = 0; k < ctx.size(); ++k) {
        const double per_wave = ctx.total_statistic(k, two[0].x, 0, MissingPolicy::exclude) +
                                ctx.total_statistic(k, two[0].x, 1, MissingPolicy::exclude);
        CHECK(tf[k] == doctest::Approx(per_wave));
    }
    CHECK(target_statistics(flat, dens)[0] == 2.0 * ctx.total_statistic(0, two[0].x, 0));
}
