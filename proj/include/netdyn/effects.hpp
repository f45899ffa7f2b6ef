#pragma once

// Objective-function effects for undirected actor-oriented models.
//
// Every effect defines a per-actor statistic s_i(x); the total statistic is
// the sum over actors. Covariate effects work on grand-mean-centered values.

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "netdyn/panel.hpp"

namespace netdyn {

enum class EffectKind { density, gwesp, degPlus, egoPlusAltX, egoPlusAltSqX, simX, dyadX };

inline constexpr EffectKind all_effect_kinds[] = {EffectKind::density,     EffectKind::gwesp,
                                                  EffectKind::degPlus,     EffectKind::egoPlusAltX,
                                                  EffectKind::egoPlusAltSqX, EffectKind::simX,
                                                  EffectKind::dyadX};

std::string_view effect_name(EffectKind kind);
/// Also accepts the aliases "degree" (density), "coDyadvar" (dyadX) and
/// the "egoPlusAtlX" spelling.
EffectKind parse_effect_kind(std::string_view text);
bool uses_actor_covariate(EffectKind kind);
bool uses_dyad_covariate(EffectKind kind);

inline constexpr double default_gwesp_decay = std::numbers::ln2;

struct EffectSpec {
    EffectKind kind = EffectKind::density;
    std::string covariate;  ///< required iff the kind is a covariate effect
    double gwesp_decay = default_gwesp_decay;

    /// "density", "gwesp", "egoPlusAltX(afi)", ...
    std::string label() const;
    bool operator==(const EffectSpec&) const = default;
};

/// Parses "kind" or "kind:covariate" (also "kind(covariate)").
EffectSpec parse_effect_spec(std::string_view text);

enum class TieRule { forcing, pairwise_conjunctive };

std::string_view tie_rule_name(TieRule rule);
TieRule parse_tie_rule(std::string_view text);

struct ModelSpec {
    std::vector<EffectSpec> effects;
    std::vector<double> beta;   ///< one per effect
    std::vector<double> rates;  ///< one per period, > 0
    TieRule rule = TieRule::forcing;

    int effect_count() const noexcept { return static_cast<int>(effects.size()); }
    int period_count() const noexcept { return static_cast<int>(rates.size()); }
    /// Throws ConfigError when the density effect is absent, sizes disagree,
    /// or a rate is not strictly positive.
    void validate() const;
};

struct CovariateSet {
    std::vector<ActorCovariate> actor;
    std::vector<DyadCovariate> dyad;

    const ActorCovariate* find_actor(std::string_view name) const;
    const DyadCovariate* find_dyad(std::string_view name) const;
};

/// Missing covariate entries either impute to the grand mean (simulation)
/// or drop every dyad they touch (target and simulated moment statistics).
enum class MissingPolicy { impute, exclude };

/// gwesp edge weight e^a (1 - (1 - e^-a)^k) for k shared partners.
inline double gwesp_weight(double decay, int shared) {
    return std::exp(decay) * (1.0 - std::pow(1.0 - std::exp(-decay), shared));
}

/// Effects bound to their covariates. Immutable after construction.
class EffectContext {
public:
    EffectContext(std::vector<EffectSpec> effects, const CovariateSet& covs, int n);

    int size() const noexcept { return static_cast<int>(effects_.size()); }
    int actors() const noexcept { return n_; }
    const EffectSpec& spec(int k) const { return effects_.at(static_cast<std::size_t>(k)); }
    const std::vector<EffectSpec>& specs() const noexcept { return effects_; }

    std::vector<double> actor_statistics(int k, const Adjacency& x, int period,
                                         MissingPolicy policy = MissingPolicy::impute) const;
    double total_statistic(int k, const Adjacency& x, int period,
                           MissingPolicy policy = MissingPolicy::impute) const;

    /// Change in actor i's statistic for effect k when x_ij is toggled.
    double change(int k, const Adjacency& x, int i, int j, int period) const;
    /// change(k, x, i, j, period) for every j, written to out[j]; out[i] = 0.
    void change_row(int k, const Adjacency& x, int i, int period, std::span<double> out) const;

    /// Centered similarity minus its mean over observed dyads (simX only).
    double centered_similarity(int k, int i, int j, int period) const;

private:
    struct Bound {
        const ActorCovariate* actor = nullptr;
        const DyadCovariate* dyad = nullptr;
        double sim_mean = 0.0;
    };

    double dyad_term(int k, int i, int j, int period) const;
    bool dyad_observed(int k, int i, int j, int period) const;
    double gwesp_change(const EffectSpec& e, const Adjacency& x, int i, int j) const;

    std::vector<EffectSpec> effects_;
    std::vector<Bound> bound_;
    int n_ = 0;
};

struct EffectStatistic {
    double total = 0.0;
    std::vector<double> per_actor;
};

/// Single-effect conveniences over a fresh context.
EffectStatistic statistic(const EffectSpec& effect, const BinaryNetwork& net, const CovariateSet& covs,
                          int period = 0, MissingPolicy policy = MissingPolicy::impute);
double change_statistic(const EffectSpec& effect, const BinaryNetwork& net, int i, int j,
                        const CovariateSet& covs, int period = 0);

/// Per effect: sum over periods m of the total statistic of wave m+1 with
/// period-m covariates, missing dyads excluded.
std::vector<double> target_statistics(const BinaryNetSeries& panel, const EffectContext& ctx);

}  // namespace netdyn
