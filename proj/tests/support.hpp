#pragma once

// Helpers and brute-force oracles shared by the unit and acceptance tests.
// The oracles recompute everything from plain nested vectors so they share no
// code path with the library beyond covariate storage.

#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "netdyn/effects.hpp"
#include "netdyn/ingest.hpp"
#include "netdyn/panel.hpp"
#include "netdyn/rng.hpp"

namespace testing {

using Matrix = std::vector<std::vector<int>>;

inline netdyn::ActorSet letters(int n) {
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back(std::string(1, static_cast<char>('A' + i / 26)) + static_cast<char>('A' + i % 26));
    return netdyn::ActorSet(ids);
}

inline Matrix to_matrix(const netdyn::Adjacency& x) {
    Matrix m(static_cast<std::size_t>(x.size()), std::vector<int>(static_cast<std::size_t>(x.size()), 0));
    for (int i = 0; i < x.size(); ++i)
        for (int j = 0; j < x.size(); ++j) m[i][j] = x.has(i, j) ? 1 : 0;
    return m;
}

inline netdyn::Adjacency from_edges(int n, const std::vector<std::pair<int, int>>& edges) {
    netdyn::Adjacency x(n);
    for (auto [a, b] : edges) x.set(a, b, true);
    return x;
}

/// Integer weights with a heavy (Pareto-like) tail; roughly `fill` of dyads positive.
inline netdyn::WeightedNetwork heavy_tailed(const netdyn::ActorSet& actors, netdyn::Rng& rng, double fill) {
    netdyn::WeightedNetwork w(actors, 2000);
    for (int i = 0; i < actors.size(); ++i)
        for (int j = i + 1; j < actors.size(); ++j)
            if (netdyn::uniform01(rng) < fill) {
                const double u = 1.0 - netdyn::uniform01(rng);
                w.set_weight(i, j, static_cast<std::int64_t>(std::floor(std::pow(u, -1.3))));
            }
    return w;
}

/// Disparity filter recomputed from scratch for every edge.
inline Matrix brute_backbone(const netdyn::WeightedNetwork& w, double level) {
    const int n = w.size();
    auto score = [&](int i, int j) {
        double s = 0.0;
        int k = 0;
        for (int h = 0; h < n; ++h)
            if (h != i && w.weight(i, h) > 0) {
                s += static_cast<double>(w.weight(i, h));
                ++k;
            }
        if (k <= 1) return 1.0;
        return std::pow(1.0 - static_cast<double>(w.weight(i, j)) / s, k - 1);
    };
    Matrix keep(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && w.weight(i, j) > 0 && std::min(score(i, j), score(j, i)) < level) keep[i][j] = 1;
    return keep;
}

/// Actor i's statistic for one effect, from the defining formulas.
inline double brute_actor_statistic(const netdyn::EffectSpec& e, const Matrix& x, int i,
                                    const netdyn::CovariateSet& covs, int m) {
    const int n = static_cast<int>(x.size());
    auto deg = [&](int a) {
        int d = 0;
        for (int b = 0; b < n; ++b) d += x[a][b];
        return d;
    };
    const netdyn::ActorCovariate* v = uses_actor_covariate(e.kind) ? covs.find_actor(e.covariate) : nullptr;
    const netdyn::DyadCovariate* dy = uses_dyad_covariate(e.kind) ? covs.find_dyad(e.covariate) : nullptr;
    double sim_mean = 0.0;
    if (e.kind == netdyn::EffectKind::simX) {
        double sum = 0.0;
        int count = 0;
        for (int p = 0; p < v->periods(); ++p)
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b)
                    if (!v->missing(a, p) && !v->missing(b, p)) {
                        sum += 1.0 - std::abs(v->value(a, p) - v->value(b, p)) / v->range();
                        ++count;
                    }
        sim_mean = sum / count;
    }
    double d_mean = 0.0;
    if (dy) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b) d_mean += dy->value(a, b);
        d_mean /= n * (n - 1);
    }
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
        if (j == i || !x[i][j]) continue;
        switch (e.kind) {
            case netdyn::EffectKind::density: s += 1.0; break;
            case netdyn::EffectKind::gwesp: {
                int esp = 0;
                for (int h = 0; h < n; ++h) esp += x[i][h] * x[j][h];
                s += std::exp(e.gwesp_decay) * (1.0 - std::pow(1.0 - std::exp(-e.gwesp_decay), esp));
                break;
            }
            case netdyn::EffectKind::degPlus: s += deg(j); break;
            case netdyn::EffectKind::egoPlusAltX: s += v->centered(i, m) + v->centered(j, m); break;
            case netdyn::EffectKind::egoPlusAltSqX: {
                const double t = v->centered(i, m) + v->centered(j, m);
                s += t * t;
                break;
            }
            case netdyn::EffectKind::simX:
                s += 1.0 - std::abs(v->imputed(i, m) - v->imputed(j, m)) / v->range() - sim_mean;
                break;
            case netdyn::EffectKind::dyadX: s += dy->value(i, j) - d_mean; break;
        }
    }
    return s;
}

/// Random covariates named "v" (actor, with missing cells) and "d" (dyadic).
inline netdyn::CovariateSet random_covariates(int n, int periods, netdyn::Rng& rng, double missing = 0.1) {
    std::vector<double> raw(static_cast<std::size_t>(n * periods));
    for (auto& r : raw) r = netdyn::uniform01(rng) < missing ? std::nan("") : 3.0 * netdyn::uniform01(rng) - 1.0;
    // keep at least two distinct observed values so the range is positive
    raw[0] = -1.0;
    raw[1] = 2.0;
    std::vector<double> d(static_cast<std::size_t>(n * n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            d[static_cast<std::size_t>(i * n + j)] = d[static_cast<std::size_t>(j * n + i)] = 5.0 * netdyn::uniform01(rng);
    netdyn::CovariateSet covs;
    covs.actor.emplace_back("v", n, periods, raw);
    covs.dyad.emplace_back("d", n, d);
    return covs;
}

inline std::vector<netdyn::EffectSpec> every_effect() {
    std::vector<netdyn::EffectSpec> out;
    for (auto kind : netdyn::all_effect_kinds) {
        netdyn::EffectSpec e{kind, "", netdyn::default_gwesp_decay};
        if (netdyn::uses_actor_covariate(kind)) e.covariate = "v";
        if (netdyn::uses_dyad_covariate(kind)) e.covariate = "d";
        out.push_back(e);
    }
    return out;
}

/// Pair counts by direct enumeration: each article adds 1 to every unordered
/// pair of its distinct mapped codes.
inline std::map<std::pair<std::string, std::string>, int> brute_tally(
    const std::vector<std::vector<std::string>>& articles_codes) {
    std::map<std::pair<std::string, std::string>, int> out;
    for (const auto& codes : articles_codes) {
        std::set<std::string> uniq(codes.begin(), codes.end());
        std::vector<std::string> v(uniq.begin(), uniq.end());
        for (std::size_t a = 0; a < v.size(); ++a)
            for (std::size_t b = a + 1; b < v.size(); ++b) ++out[{v[a], v[b]}];
    }
    return out;
}

}  // namespace testing
