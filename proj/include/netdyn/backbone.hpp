#pragma once

// Disparity-filter edge significance and binary backbone extraction.

#include <cstdint>
#include <vector>

#include "netdyn/panel.hpp"

namespace netdyn {

inline constexpr double default_alpha_level = 0.05;

struct BackboneScores {
    ActorSet actors;
    int year = 0;
    int n = 0;
    std::vector<double> alpha;  ///< n*n, symmetric; min of the two directed scores, 1 where w = 0
    std::vector<double> p;      ///< n*n, p(i,j) = w_ij / s_i (row-normalised, not symmetric)
    std::vector<int> k;         ///< positive-weight degree
    std::vector<std::int64_t> s;  ///< strength

    double alpha_at(int i, int j) const { return alpha[cell(i, j)]; }
    double p_at(int i, int j) const { return p[cell(i, j)]; }

private:
    std::size_t cell(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j);
    }
};

/// Score of edge (i,j) as seen from i: (1 - w/s)^(k-1), or 1 when k <= 1.
double directed_disparity_score(std::int64_t w, std::int64_t strength, int degree);

BackboneScores disparity_scores(const WeightedNetwork& net);

struct Backbone {
    BinaryNetwork net;
    std::int64_t positive_edges = 0;
    std::int64_t retained_edges = 0;

    /// 1 - retained / positive; 0 for a network without positive weights.
    double trimming_fraction() const {
        return positive_edges == 0 ? 0.0
                                   : 1.0 - static_cast<double>(retained_edges) / static_cast<double>(positive_edges);
    }
};

/// Keeps edge (i,j) iff w_ij > 0 and min(alpha(i->j), alpha(j->i)) < alpha_level.
/// alpha_level must lie in (0, 1]; at exactly 1 every positive-weight edge is kept.
Backbone extract_backbone(const WeightedNetwork& net, double alpha_level = default_alpha_level);
Backbone extract_backbone(const WeightedNetwork& net, const BackboneScores& scores, double alpha_level);

}  // namespace netdyn
