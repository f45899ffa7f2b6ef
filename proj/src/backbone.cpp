#include "netdyn/backbone.hpp"

#include <algorithm>
#include <cmath>

#include "netdyn/error.hpp"

namespace netdyn {

double directed_disparity_score(std::int64_t w, std::int64_t strength, int degree) {
    if (degree <= 1) return 1.0;
    const double p = static_cast<double>(w) / static_cast<double>(strength);
    return std::pow(1.0 - p, degree - 1);
}

BackboneScores disparity_scores(const WeightedNetwork& net) {
    const int n = net.size();
    const auto nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    BackboneScores sc;
    sc.actors = net.actors();
    sc.year = net.year();
    sc.n = n;
    sc.alpha.assign(nn, 1.0);
    sc.p.assign(nn, 0.0);
    sc.k.resize(static_cast<std::size_t>(n));
    sc.s.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        sc.k[static_cast<std::size_t>(i)] = net.positive_degree(i);
        sc.s[static_cast<std::size_t>(i)] = net.strength(i);
    }

    // directed scores, row by row
    std::vector<double> directed(nn, 1.0);
    for (int i = 0; i < n; ++i) {
        const auto s = sc.s[static_cast<std::size_t>(i)];
        const int k = sc.k[static_cast<std::size_t>(i)];
        for (int j = 0; j < n; ++j) {
            const auto w = net.weight(i, j);
            if (w <= 0) continue;
            const auto c = static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
            sc.p[c] = static_cast<double>(w) / static_cast<double>(s);
            directed[c] = directed_disparity_score(w, s, k);
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const auto ij = static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
            const auto ji = static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
            sc.alpha[ij] = std::min(directed[ij], directed[ji]);
        }
    }
    return sc;
}

Backbone extract_backbone(const WeightedNetwork& net, const BackboneScores& scores, double alpha_level) {
    if (!(alpha_level > 0.0 && alpha_level <= 1.0))
        throw ConfigError("backbone alpha level must lie in (0, 1], got " + std::to_string(alpha_level));
    Backbone out{BinaryNetwork(net.actors(), net.year()), 0, 0};
    const bool keep_all = alpha_level >= 1.0;
    for (int i = 0; i < net.size(); ++i) {
        for (int j = i + 1; j < net.size(); ++j) {
            if (net.weight(i, j) <= 0) continue;
            ++out.positive_edges;
            if (keep_all || scores.alpha_at(i, j) < alpha_level) {
                out.net.x.set(i, j, true);
                ++out.retained_edges;
            }
        }
    }
    return out;
}

Backbone extract_backbone(const WeightedNetwork& net, double alpha_level) {
    return extract_backbone(net, disparity_scores(net), alpha_level);
}

}  // namespace netdyn
