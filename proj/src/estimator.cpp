#include "netdyn/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "netdyn/error.hpp"
#include "netdyn/parallel.hpp"
#include "netdyn/rng.hpp"
#include "netdyn/simulator.hpp"

namespace netdyn {

namespace {

constexpr std::uint64_t phase1_stream = 1;
constexpr std::uint64_t phase2_stream = 2;
constexpr std::uint64_t phase3_stream = 3;
constexpr double max_condition = 1e10;
constexpr double divergence_norm = 1e3;

// Rates may not drop below half their previous value in one step.
void keep_rates_positive(Eigen::VectorXd& theta, const Eigen::VectorXd& previous, int periods) {
    for (int m = 0; m < periods; ++m) theta(m) = std::max(theta(m), 0.5 * previous(m));
}

void check_nonsingular(const Eigen::MatrixXd& d) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
    const auto& sv = svd.singularValues();
    const double hi = sv(0);
    const double lo = sv(sv.size() - 1);
    if (!(hi > 0.0) || !(lo > 0.0) || hi / lo > max_condition || !std::isfinite(hi / lo)) {
        std::ostringstream msg;
        msg << "derivative matrix is singular (condition number " << (lo > 0 ? hi / lo : INFINITY)
            << "); some effects are collinear or have no influence on their statistics, respecify the model";
        throw SingularDerivativeError(msg.str());
    }
}

struct CrnDerivative {
    Eigen::MatrixXd derivative;
    std::vector<Eigen::VectorXd> base;
};

// For each chain r: S(theta) and S(theta + h e_k) on the same seed.
CrnDerivative crn_derivative(const Eigen::VectorXd& theta, const MomentProblem& problem, int chains,
                             std::uint64_t stream, double h, std::uint64_t master,
                             std::vector<std::vector<Adjacency>>* ends) {
    const int p = problem.parameter_count();
    std::vector<Eigen::VectorXd> base(static_cast<std::size_t>(chains));
    std::vector<Eigen::MatrixXd> diffs(static_cast<std::size_t>(chains));
    if (ends) ends->assign(static_cast<std::size_t>(chains), {});
    parallel_for(static_cast<std::size_t>(chains), [&](std::size_t r) {
        const auto seed = derive_seed(master, {stream, r});
        base[r] = problem.simulate(theta, seed, ends ? &(*ends)[r] : nullptr);
        diffs[r].resize(p, p);
        for (int k = 0; k < p; ++k) {
            Eigen::VectorXd shifted = theta;
            shifted(k) += h;
            diffs[r].col(k) = (problem.simulate(shifted, seed) - base[r]) / h;
        }
    });
    CrnDerivative out;
    out.derivative = Eigen::MatrixXd::Zero(p, p);
    for (const auto& d : diffs) out.derivative += d;
    out.derivative /= chains;
    out.base = std::move(base);
    return out;
}

}  // namespace

void EstimationOptions::validate() const {
    if (n1 <= 0 || subphases <= 0 || n3 <= 0) throw ConfigError("simulation counts must be positive");
    if (!(gain > 0.0 && gain < 1.0)) throw ConfigError("initial gain must lie in (0, 1)");
    if (!(fd_step > 0.0)) throw ConfigError("finite-difference step must be positive");
    if (!(max_convergence_ratio > 0.0)) throw ConfigError("convergence threshold must be positive");
    if (subphase_cap < 0) throw ConfigError("subphase cap must be nonnegative");
}

InitialValues initialize(const BinaryNetSeries& panel, const std::vector<EffectSpec>& effects) {
    if (panel.size() < 2) throw DegenerateInputError("estimation needs at least two waves");
    const int periods = static_cast<int>(panel.size()) - 1;
    const int n = panel.front().size();
    if (n < 2) throw DegenerateInputError("estimation needs at least two actors");
    InitialValues out;
    out.theta = Eigen::VectorXd::Zero(periods + static_cast<int>(effects.size()));
    bool any_change = false;
    for (int m = 0; m < periods; ++m) {
        const auto h = panel[static_cast<std::size_t>(m) + 1].x.hamming(panel[static_cast<std::size_t>(m)].x);
        any_change = any_change || h > 0;
        out.theta(m) = h > 0 ? static_cast<double>(h) / (n - 1) : rate_floor;
    }
    if (!any_change) out.warnings.push_back("no observed change in any period; rates start at the floor value");
    for (std::size_t k = 0; k < effects.size(); ++k)
        if (effects[k].kind == EffectKind::density) out.theta(periods + static_cast<int>(k)) = -1.0;
    return out;
}

// ---------------------------------------------------------------------------

MomentProblem::MomentProblem(BinaryNetSeries panel, std::vector<EffectSpec> effects, const CovariateSet& covs,
                             TieRule rule)
    : panel_(std::move(panel)),
      ctx_(std::move(effects), covs, panel_.empty() ? 0 : panel_.front().size()),
      rule_(rule) {
    if (panel_.size() < 2) throw DegenerateInputError("estimation needs at least two waves");
    for (const auto& w : panel_)
        if (!(w.actors == panel_.front().actors)) throw ValidationError("waves are observed on different actor sets");
    for (const auto& e : ctx_.specs())
        if (uses_actor_covariate(e.kind) && covs.find_actor(e.covariate)->periods() < periods())
            throw ValidationError("covariate " + e.covariate + " covers fewer periods than the panel");
    if (std::none_of(ctx_.specs().begin(), ctx_.specs().end(),
                     [](const EffectSpec& e) { return e.kind == EffectKind::density; }))
        throw ConfigError("model must include the density effect");
    const auto t = target_statistics(panel_, ctx_);
    targets_.resize(parameter_count());
    for (int m = 0; m < periods(); ++m)
        targets_(m) = static_cast<double>(panel_[static_cast<std::size_t>(m) + 1].x.hamming(panel_[static_cast<std::size_t>(m)].x));
    for (int k = 0; k < ctx_.size(); ++k) targets_(periods() + k) = t[static_cast<std::size_t>(k)];
}

std::vector<std::string> MomentProblem::parameter_names() const {
    std::vector<std::string> names;
    for (int m = 0; m < periods(); ++m) names.push_back("rate " + std::to_string(m + 1));
    for (const auto& e : ctx_.specs()) names.push_back(e.label());
    return names;
}

ModelSpec MomentProblem::model_at(const Eigen::VectorXd& theta) const {
    ModelSpec model;
    model.effects = ctx_.specs();
    model.rule = rule_;
    for (int m = 0; m < periods(); ++m) model.rates.push_back(theta(m));
    for (int k = 0; k < ctx_.size(); ++k) model.beta.push_back(theta(periods() + k));
    return model;
}

Eigen::VectorXd MomentProblem::simulate(const Eigen::VectorXd& theta, std::uint64_t seed,
                                        std::vector<Adjacency>* ends) const {
    const auto model = model_at(theta);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(parameter_count());
    if (ends) ends->clear();
    for (int m = 0; m < periods(); ++m) {
        auto out = simulate_period(panel_[static_cast<std::size_t>(m)].x, model, ctx_, m,
                                   derive_seed(seed, {static_cast<std::uint64_t>(m)}));
        s(m) = static_cast<double>(out.hamming);
        for (int k = 0; k < ctx_.size(); ++k) s(periods() + k) += out.statistics[static_cast<std::size_t>(k)];
        if (ends) ends->push_back(std::move(out.end));
    }
    return s;
}

// ---------------------------------------------------------------------------

Phase1Result phase1_derivative(const Eigen::VectorXd& theta0, const MomentProblem& problem,
                               const EstimationOptions& options) {
    options.validate();
    if (!theta0.allFinite()) throw NumericalError("phase 1 started from a non-finite parameter vector");
    auto crn = crn_derivative(theta0, problem, options.n1, phase1_stream, options.fd_step, options.seed, nullptr);
    check_nonsingular(crn.derivative);
    Phase1Result out;
    out.derivative = std::move(crn.derivative);
    out.mean_statistics = Eigen::VectorXd::Zero(problem.parameter_count());
    for (const auto& s : crn.base) out.mean_statistics += s;
    out.mean_statistics /= options.n1;
    return out;
}

Phase2Result phase2_update(const Eigen::VectorXd& theta_start, const Eigen::MatrixXd& derivative,
                           const MomentProblem& problem, const EstimationOptions& options) {
    options.validate();
    const int p = problem.parameter_count();
    const int periods = problem.periods();
    const int cap = options.cap_for(p);
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(derivative);
    if (!lu.isInvertible()) throw SingularDerivativeError("phase 2 needs an invertible derivative matrix");
    const Eigen::MatrixXd dinv = lu.inverse();

    Phase2Result out;
    Eigen::VectorXd theta = theta_start;
    double gain = options.gain;
    std::uint64_t step = 0;
    for (int sub = 0; sub < options.subphases; ++sub) {
        const int min_iterations =
            std::min(cap, static_cast<int>(std::ceil((7 + p) * std::pow(2.0, 4.0 * sub / 3.0))));
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(p);
        Eigen::VectorXd autocorrelation = Eigen::VectorXd::Zero(p);
        Eigen::VectorXd previous_deviation;
        int it = 0;
        while (it < cap) {
            const Eigen::VectorXd dev =
                problem.simulate(theta, derive_seed(options.seed, {phase2_stream, step++})) - problem.targets();
            if (it > 0) autocorrelation += dev.cwiseProduct(previous_deviation);
            previous_deviation = dev;
            const Eigen::VectorXd before = theta;
            theta -= gain * (dinv * dev);
            keep_rates_positive(theta, before, periods);
            if (!theta.allFinite() || theta.norm() > divergence_norm) {
                std::ostringstream msg;
                msg << "phase 2 diverged in subphase " << sub + 1 << " at iteration " << it + 1
                    << "; last parameters:";
                for (int k = 0; k < p; ++k) msg << ' ' << before(k);
                msg << "; deviations:";
                for (int k = 0; k < p; ++k) msg << ' ' << dev(k);
                throw DivergenceError(msg.str());
            }
            sum += theta;
            ++it;
            if (it >= min_iterations && (autocorrelation.array() < 0.0).all()) break;
        }
        theta = sum / it;
        out.subphase_iterations.push_back(it);
        out.iterations += it;
        gain *= 0.5;
    }
    out.theta = theta;
    return out;
}

EstimationResult phase3_finalize(const Eigen::VectorXd& theta, const MomentProblem& problem,
                                 const EstimationOptions& options) {
    options.validate();
    const int p = problem.parameter_count();
    const int periods = problem.periods();
    const int n3 = options.n3;

    std::vector<std::vector<Adjacency>> ends;
    auto crn = crn_derivative(theta, problem, n3, phase3_stream, options.fd_step, options.seed,
                              options.retain_draws ? &ends : nullptr);

    EstimationResult r;
    r.effects = problem.context().specs();
    r.rule = problem.model_at(theta).rule;
    r.periods = periods;
    r.parameter_names = problem.parameter_names();
    r.theta = theta;
    r.targets = problem.targets();
    r.seed = options.seed;
    r.phase3_iterations = n3;
    r.derivative = crn.derivative;

    Eigen::MatrixXd stats(n3, p);
    for (int d = 0; d < n3; ++d) stats.row(d) = crn.base[static_cast<std::size_t>(d)].transpose();
    r.mean_statistics = stats.colwise().mean().transpose();
    const Eigen::MatrixXd centered = stats.rowwise() - r.mean_statistics.transpose();
    r.covariance = (centered.transpose() * centered) / std::max(1, n3 - 1);

    const Eigen::VectorXd dev = r.mean_statistics - r.targets;
    r.t_ratios.resize(p);
    for (int k = 0; k < p; ++k) {
        const double sd = std::sqrt(r.covariance(k, k));
        r.t_ratios(k) = sd > 0.0 ? dev(k) / sd : (dev(k) == 0.0 ? 0.0 : INFINITY);
    }

    Eigen::MatrixXd sigma = r.covariance;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
    const double top = eig.eigenvalues().maxCoeff();
    if (!(eig.eigenvalues().minCoeff() > 1e-12 * std::max(top, 1.0))) {
        sigma += 1e-8 * Eigen::MatrixXd::Identity(p, p);
        r.covariance_ridge = true;
        r.warnings.push_back("statistic covariance is singular; added 1e-8 to its diagonal");
    }
    r.max_convergence_ratio = std::sqrt(std::max(0.0, dev.dot(sigma.ldlt().solve(dev))));

    const Eigen::FullPivLU<Eigen::MatrixXd> lu(r.derivative);
    if (!lu.isInvertible()) throw SingularDerivativeError("phase 3 derivative matrix is singular");
    const Eigen::MatrixXd dinv = lu.inverse();
    const Eigen::MatrixXd cov_theta = dinv * sigma * dinv.transpose();
    r.se = cov_theta.diagonal().cwiseMax(0.0).cwiseSqrt();

    if (options.retain_draws) {
        if (options.retain_all_periods) {
            for (int m = 0; m < periods; ++m) r.draw_periods.push_back(m);
        } else {
            r.draw_periods.push_back(periods - 1);
        }
        r.draws.resize(static_cast<std::size_t>(n3));
        for (int d = 0; d < n3; ++d) {
            auto& draw = r.draws[static_cast<std::size_t>(d)];
            draw.statistics = crn.base[static_cast<std::size_t>(d)];
            for (int m : r.draw_periods) draw.ends.push_back(std::move(ends[static_cast<std::size_t>(d)][static_cast<std::size_t>(m)]));
        }
    }
    return r;
}

EstimationResult estimate(const MomentProblem& problem, const EstimationOptions& options) {
    options.validate();
    auto init = initialize(problem.panel(), problem.context().specs());
    auto phase1 = phase1_derivative(init.theta, problem, options);

    // Newton step from the phase-1 means.
    const Eigen::VectorXd step = phase1.derivative.fullPivLu().solve(phase1.mean_statistics - problem.targets());
    Eigen::VectorXd theta = init.theta - step;
    keep_rates_positive(theta, init.theta, problem.periods());

    auto phase2 = phase2_update(theta, phase1.derivative, problem, options);
    auto result = phase3_finalize(phase2.theta, problem, options);
    result.phase1_iterations = options.n1;
    result.phase2_iterations = phase2.iterations;
    result.subphase_iterations = phase2.subphase_iterations;
    result.warnings.insert(result.warnings.begin(), init.warnings.begin(), init.warnings.end());
    if (result.max_convergence_ratio >= options.max_convergence_ratio) {
        std::ostringstream msg;
        msg << "overall maximum convergence ratio " << result.max_convergence_ratio << " exceeds "
            << options.max_convergence_ratio << "; consider rerunning from these estimates";
        result.warnings.push_back(msg.str());
    }
    return result;
}

// ---------------------------------------------------------------------------

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double two_sided_p(double estimate, double se) {
    if (!(se > 0.0)) throw UndefinedPValueError("p-value undefined for a standard error of " + std::to_string(se));
    const double z = std::abs(estimate / se);
    return std::erfc(z / std::sqrt(2.0));
}

std::string significance_stars(double p) {
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    return "";
}

std::vector<ParameterTest> p_values(const EstimationResult& result) {
    std::vector<ParameterTest> out;
    for (int k = 0; k < result.effect_count(); ++k) {
        ParameterTest t;
        t.name = result.effects[static_cast<std::size_t>(k)].label();
        t.estimate = result.beta(k);
        t.se = result.beta_se(k);
        t.p = two_sided_p(t.estimate, t.se);
        t.z = t.estimate / t.se;
        t.stars = significance_stars(t.p);
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace netdyn
