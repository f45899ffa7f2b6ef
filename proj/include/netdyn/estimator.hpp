#pragma once

// Method-of-moments estimation by three-phase Robbins-Monro stochastic
// approximation.
//
// The parameter vector is laid out as [rate_0 .. rate_{M-2}, beta_0 .. beta_{K-1}]
// for a panel of M waves and K effects. The matching statistic vector is
// [hamming_0 .. hamming_{M-2}, effect_0 .. effect_{K-1}], where hamming_m counts
// the dyads changed over period m and effect_k sums the effect's total
// statistic over the end-of-period networks.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "netdyn/effects.hpp"
#include "netdyn/panel.hpp"

namespace netdyn {

struct EstimationOptions {
    int n1 = 50;           ///< phase-1 simulations
    int subphases = 4;
    int n3 = 1000;         ///< phase-3 simulations
    double gain = 0.2;     ///< initial phase-2 gain, halved each subphase
    double max_convergence_ratio = 0.25;
    double fd_step = 0.1;  ///< finite-difference perturbation per coordinate
    int subphase_cap = 0;  ///< 0 selects 200 + 10 p
    std::uint64_t seed = 1;
    bool retain_draws = true;
    bool retain_all_periods = false;  ///< otherwise only the last period's end networks

    void validate() const;
    int cap_for(int parameters) const { return subphase_cap > 0 ? subphase_cap : 200 + 10 * parameters; }
};

struct SimulationDraw {
    Eigen::VectorXd statistics;
    std::vector<Adjacency> ends;  ///< one per retained period, see EstimationResult::draw_periods
};

struct EstimationResult {
    std::vector<EffectSpec> effects;
    TieRule rule = TieRule::forcing;
    int periods = 0;
    std::vector<std::string> parameter_names;

    Eigen::VectorXd theta;
    Eigen::VectorXd se;
    Eigen::MatrixXd derivative;  ///< D(l,k) = dE[S_l]/d theta_k
    Eigen::MatrixXd covariance;  ///< covariance of the phase-3 statistics
    Eigen::VectorXd targets;
    Eigen::VectorXd mean_statistics;
    Eigen::VectorXd t_ratios;
    double max_convergence_ratio = 0.0;
    bool covariance_ridge = false;

    int phase1_iterations = 0;
    int phase2_iterations = 0;
    int phase3_iterations = 0;
    std::vector<int> subphase_iterations;
    int iteration_steps() const { return phase1_iterations + phase2_iterations + phase3_iterations; }

    std::uint64_t seed = 0;
    std::vector<std::string> warnings;

    std::vector<SimulationDraw> draws;
    std::vector<int> draw_periods;

    int rate_count() const { return periods; }
    int effect_count() const { return static_cast<int>(effects.size()); }
    double beta(int k) const { return theta(periods + k); }
    double beta_se(int k) const { return se(periods + k); }
    double rate(int m) const { return theta(m); }
};

struct InitialValues {
    Eigen::VectorXd theta;
    std::vector<std::string> warnings;
};

inline constexpr double rate_floor = 0.5;

/// Starting values: rate_m = H_m / (n - 1) from the observed Hamming distance
/// H_m (the floor when H_m = 0), density -1, every other effect 0.
InitialValues initialize(const BinaryNetSeries& panel, const std::vector<EffectSpec>& effects);

/// Binds a panel and effect list for moment-based estimation.
class MomentProblem {
public:
    MomentProblem(BinaryNetSeries panel, std::vector<EffectSpec> effects, const CovariateSet& covs,
                  TieRule rule = TieRule::forcing);

    int periods() const noexcept { return static_cast<int>(panel_.size()) - 1; }
    int parameter_count() const noexcept { return periods() + ctx_.size(); }
    const BinaryNetSeries& panel() const noexcept { return panel_; }
    const EffectContext& context() const noexcept { return ctx_; }
    const Eigen::VectorXd& targets() const noexcept { return targets_; }
    std::vector<std::string> parameter_names() const;

    ModelSpec model_at(const Eigen::VectorXd& theta) const;
    /// One simulated statistic vector: every period restarts from its observed wave.
    Eigen::VectorXd simulate(const Eigen::VectorXd& theta, std::uint64_t seed,
                             std::vector<Adjacency>* ends = nullptr) const;

private:
    BinaryNetSeries panel_;
    EffectContext ctx_;
    TieRule rule_;
    Eigen::VectorXd targets_;
};

struct Phase1Result {
    Eigen::MatrixXd derivative;
    Eigen::VectorXd mean_statistics;
};

/// Common-random-number finite differences over n1 chains. Throws
/// SingularDerivativeError when D is (numerically) singular.
Phase1Result phase1_derivative(const Eigen::VectorXd& theta0, const MomentProblem& problem,
                               const EstimationOptions& options);

struct Phase2Result {
    Eigen::VectorXd theta;
    std::vector<int> subphase_iterations;
    int iterations = 0;
};

/// Robbins-Monro iterations theta <- theta - a D^-1 (S - s), gain halved per
/// subphase; each subphase returns the average of its iterates.
Phase2Result phase2_update(const Eigen::VectorXd& theta, const Eigen::MatrixXd& derivative,
                           const MomentProblem& problem, const EstimationOptions& options);

/// n3 simulations at fixed theta: covariance, derivative, standard errors and
/// convergence diagnostics.
EstimationResult phase3_finalize(const Eigen::VectorXd& theta, const MomentProblem& problem,
                                 const EstimationOptions& options);

/// Full three-phase run.
EstimationResult estimate(const MomentProblem& problem, const EstimationOptions& options);

struct ParameterTest {
    std::string name;
    double estimate = 0.0;
    double se = 0.0;
    double z = 0.0;
    double p = 1.0;
    std::string stars;
};

double normal_cdf(double z);
/// 2 (1 - Phi(|estimate / se|)); throws UndefinedPValueError when se <= 0.
double two_sided_p(double estimate, double se);
/// "***" below 0.001, "**" below 0.01, "*" below 0.05, else "".
std::string significance_stars(double p);

/// Tests for the effect parameters (rates are not tested).
std::vector<ParameterTest> p_values(const EstimationResult& result);

}  // namespace netdyn
