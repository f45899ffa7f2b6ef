#pragma once

// Goodness of fit: observed auxiliary statistics against the phase-3
// simulation distribution, with a Monte-Carlo Mahalanobis test.

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "netdyn/estimator.hpp"
#include "netdyn/panel.hpp"

namespace netdyn {

enum class AuxKind { degree_distribution, triad_census };

std::string_view aux_name(AuxKind kind);

inline constexpr std::array<std::string_view, 4> triad_labels = {"003", "102", "201", "300"};
inline constexpr int min_gof_draws = 20;
inline constexpr double pinv_tolerance = 1e-10;

/// Entry k counts actors of degree exactly k for k = 0..max_k; the last entry
/// (index max_k + 1) counts degrees above max_k.
std::vector<std::int64_t> degree_distribution_aux(const Adjacency& x, int max_k);
std::vector<std::int64_t> degree_distribution_aux(const BinaryNetwork& net, int max_k);

/// Triples by number of internal edges: {003, 102, 201, 300}. Needs n >= 3.
std::array<std::int64_t, 4> triad_census_undirected(const Adjacency& x);
std::array<std::int64_t, 4> triad_census_undirected(const BinaryNetwork& net);

struct AuxiliaryStat {
    AuxKind kind = AuxKind::degree_distribution;
    std::vector<std::string> dimensions;
    Eigen::VectorXd observed;
    Eigen::MatrixXd simulated;  ///< draws x dimensions
    Eigen::VectorXd q05, q50, q95;
    Eigen::VectorXd draw_distances;
    double observed_distance = 0.0;
    double p = 1.0;
    int rank = 0;  ///< rank of the draw covariance after pseudo-inversion
};

/// Proportion of draws at least as far (Mahalanobis, pseudo-inverse of the
/// draw covariance) from the draw mean as the observation.
AuxiliaryStat mahalanobis_test(AuxKind kind, std::vector<std::string> dimensions, const Eigen::VectorXd& observed,
                               const Eigen::MatrixXd& simulated);

/// Type-7 (linear interpolation) sample quantile.
double quantile(std::vector<double> values, double q);

struct GofOptions {
    int max_degree = 10;
    int period = -1;  ///< -1: last period, compared with the final wave
};

/// Auxiliary vector on the wave ending `options.period` against the retained
/// phase-3 end networks of that period.
AuxiliaryStat gof_test(const EstimationResult& result, const BinaryNetSeries& panel, AuxKind kind,
                       const GofOptions& options = {});

}  // namespace netdyn
