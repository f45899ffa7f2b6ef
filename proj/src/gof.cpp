#include "netdyn/gof.hpp"

#include <algorithm>
#include <cmath>

#include "netdyn/error.hpp"

namespace netdyn {

std::string_view aux_name(AuxKind kind) {
    return kind == AuxKind::degree_distribution ? "degree_distribution" : "triad_census";
}

std::vector<std::int64_t> degree_distribution_aux(const Adjacency& x, int max_k) {
    if (max_k < 0) throw ConfigError("maximum degree bucket must be nonnegative");
    std::vector<std::int64_t> out(static_cast<std::size_t>(max_k) + 2, 0);
    for (int d : x.degrees()) ++out[static_cast<std::size_t>(std::min(d, max_k + 1))];
    return out;
}

std::vector<std::int64_t> degree_distribution_aux(const BinaryNetwork& net, int max_k) {
    return degree_distribution_aux(net.x, max_k);
}

std::array<std::int64_t, 4> triad_census_undirected(const Adjacency& x) {
    const std::int64_t n = x.size();
    if (n < 3) throw DegenerateInputError("triad census needs at least three actors");
    // Edge-based counting: each triangle is seen from its three edges, each
    // open two-path from its centre.
    std::int64_t triangles3 = 0;
    std::int64_t one_edge = 0;
    for (int i = 0; i < n; ++i) {
        for (int j : x.neighbors(i)) {
            if (j < i) continue;
            const std::int64_t cn = x.common_neighbors(i, j);
            triangles3 += cn;
            one_edge += n - x.degree(i) - x.degree(j) + cn;
        }
    }
    const std::int64_t triangles = triangles3 / 3;
    std::int64_t paths = 0;
    for (int d : x.degrees()) paths += static_cast<std::int64_t>(d) * (d - 1) / 2;
    const std::int64_t two_edge = paths - 3 * triangles;
    const std::int64_t all = n * (n - 1) * (n - 2) / 6;
    return {all - one_edge - two_edge - triangles, one_edge, two_edge, triangles};
}

std::array<std::int64_t, 4> triad_census_undirected(const BinaryNetwork& net) { return triad_census_undirected(net.x); }

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw DegenerateInputError("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

AuxiliaryStat mahalanobis_test(AuxKind kind, std::vector<std::string> dimensions, const Eigen::VectorXd& observed,
                               const Eigen::MatrixXd& simulated) {
    const auto draws = simulated.rows();
    const auto dims = simulated.cols();
    if (draws < min_gof_draws)
        throw InsufficientDrawsError("goodness of fit needs at least " + std::to_string(min_gof_draws) +
                                     " simulation draws, got " + std::to_string(draws));
    if (observed.size() != dims) throw ValidationError("observed auxiliary vector does not match simulated dimensions");

    AuxiliaryStat a;
    a.kind = kind;
    a.dimensions = std::move(dimensions);
    a.observed = observed;
    a.simulated = simulated;

    a.q05.resize(dims);
    a.q50.resize(dims);
    a.q95.resize(dims);
    for (Eigen::Index c = 0; c < dims; ++c) {
        std::vector<double> col(simulated.col(c).data(), simulated.col(c).data() + draws);
        a.q05(c) = quantile(col, 0.05);
        a.q50(c) = quantile(col, 0.50);
        a.q95(c) = quantile(std::move(col), 0.95);
    }

    const Eigen::VectorXd mean = simulated.colwise().mean().transpose();
    const Eigen::MatrixXd centered = simulated.rowwise() - mean.transpose();
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(draws - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    const Eigen::VectorXd& ev = eig.eigenvalues();
    const double top = ev.size() ? ev.maxCoeff() : 0.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(dims);
    for (Eigen::Index k = 0; k < dims; ++k) {
        if (ev(k) > pinv_tolerance * std::max(top, 1.0) && ev(k) > pinv_tolerance) {
            inv(k) = 1.0 / ev(k);
            ++a.rank;
        }
    }
    // distance in the eigenbasis restricted to the retained directions
    auto distance = [&](const Eigen::VectorXd& v) {
        const Eigen::VectorXd proj = eig.eigenvectors().transpose() * (v - mean);
        return (proj.array().square() * inv.array()).sum();
    };

    a.observed_distance = distance(observed);
    a.draw_distances.resize(draws);
    Eigen::Index at_least = 0;
    const double slack = 1e-9 * std::max(1.0, a.observed_distance);
    for (Eigen::Index d = 0; d < draws; ++d) {
        a.draw_distances(d) = distance(simulated.row(d).transpose());
        if (a.draw_distances(d) >= a.observed_distance - slack) ++at_least;
    }
    a.p = static_cast<double>(at_least) / static_cast<double>(draws);
    if (!std::isfinite(a.observed_distance)) throw NumericalError("non-finite Mahalanobis distance");
    return a;
}

AuxiliaryStat gof_test(const EstimationResult& result, const BinaryNetSeries& panel, AuxKind kind,
                       const GofOptions& options) {
    if (result.draws.empty())
        throw InsufficientDrawsError("estimation result holds no simulation draws; rerun estimation with draw retention enabled");
    const int period = options.period < 0 ? result.periods - 1 : options.period;
    auto slot = std::find(result.draw_periods.begin(), result.draw_periods.end(), period);
    if (slot == result.draw_periods.end())
        throw InsufficientDrawsError("no draws retained for period " + std::to_string(period + 1) +
                                     "; rerun estimation retaining all periods");
    const auto idx = static_cast<std::size_t>(slot - result.draw_periods.begin());
    if (static_cast<std::size_t>(period) + 1 >= panel.size()) throw ValidationError("panel has fewer waves than the estimation result");
    const auto& observed_net = panel[static_cast<std::size_t>(period) + 1].x;

    auto aux = [&](const Adjacency& x) -> std::vector<std::int64_t> {
        if (kind == AuxKind::degree_distribution) return degree_distribution_aux(x, options.max_degree);
        const auto t = triad_census_undirected(x);
        return {t.begin(), t.end()};
    };

    std::vector<std::string> dims;
    if (kind == AuxKind::degree_distribution) {
        for (int k = 0; k <= options.max_degree; ++k) dims.push_back(std::to_string(k));
        dims.push_back(">" + std::to_string(options.max_degree));
    } else {
        for (auto l : triad_labels) dims.emplace_back(l);
    }

    const auto obs = aux(observed_net);
    Eigen::VectorXd observed(static_cast<Eigen::Index>(obs.size()));
    for (std::size_t c = 0; c < obs.size(); ++c) observed(static_cast<Eigen::Index>(c)) = static_cast<double>(obs[c]);
    Eigen::MatrixXd simulated(static_cast<Eigen::Index>(result.draws.size()), observed.size());
    for (std::size_t d = 0; d < result.draws.size(); ++d) {
        const auto v = aux(result.draws[d].ends.at(idx));
        for (std::size_t c = 0; c < v.size(); ++c)
            simulated(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(c)) = static_cast<double>(v[c]);
    }
    return mahalanobis_test(kind, std::move(dims), observed, simulated);
}

}  // namespace netdyn
