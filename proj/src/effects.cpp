#include "netdyn/effects.hpp"

#include <algorithm>

#include "netdyn/error.hpp"

namespace netdyn {

std::string_view effect_name(EffectKind kind) {
    switch (kind) {
        case EffectKind::density: return "density";
        case EffectKind::gwesp: return "gwesp";
        case EffectKind::degPlus: return "degPlus";
        case EffectKind::egoPlusAltX: return "egoPlusAltX";
        case EffectKind::egoPlusAltSqX: return "egoPlusAltSqX";
        case EffectKind::simX: return "simX";
        case EffectKind::dyadX: return "dyadX";
    }
    return "?";
}

EffectKind parse_effect_kind(std::string_view text) {
    for (auto k : all_effect_kinds)
        if (text == effect_name(k)) return k;
    if (text == "degree") return EffectKind::density;
    if (text == "coDyadvar" || text == "X") return EffectKind::dyadX;
    if (text == "egoPlusAtlX") return EffectKind::egoPlusAltX;
    if (text == "degplus") return EffectKind::degPlus;
    throw ConfigError("unknown effect kind: \"" + std::string(text) + "\"");
}

bool uses_actor_covariate(EffectKind kind) {
    return kind == EffectKind::egoPlusAltX || kind == EffectKind::egoPlusAltSqX || kind == EffectKind::simX;
}

bool uses_dyad_covariate(EffectKind kind) { return kind == EffectKind::dyadX; }

std::string EffectSpec::label() const {
    std::string s(effect_name(kind));
    if (!covariate.empty()) s += "(" + covariate + ")";
    return s;
}

EffectSpec parse_effect_spec(std::string_view text) {
    auto trim = [](std::string_view s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    };
    text = trim(text);
    EffectSpec e;
    std::string_view kind = text;
    std::string_view cov;
    if (auto colon = text.find(':'); colon != std::string_view::npos) {
        kind = trim(text.substr(0, colon));
        cov = trim(text.substr(colon + 1));
    } else if (auto open = text.find('('); open != std::string_view::npos && text.back() == ')') {
        kind = trim(text.substr(0, open));
        cov = trim(text.substr(open + 1, text.size() - open - 2));
    }
    e.kind = parse_effect_kind(kind);
    e.covariate = std::string(cov);
    const bool needs = uses_actor_covariate(e.kind) || uses_dyad_covariate(e.kind);
    if (needs && e.covariate.empty())
        throw ConfigError("effect " + std::string(kind) + " needs a covariate name");
    if (!needs && !e.covariate.empty())
        throw ConfigError("effect " + std::string(kind) + " takes no covariate");
    return e;
}

std::string_view tie_rule_name(TieRule rule) {
    return rule == TieRule::forcing ? "forcing" : "pairwise-conjunctive";
}

TieRule parse_tie_rule(std::string_view text) {
    if (text == "forcing") return TieRule::forcing;
    if (text == "pairwise-conjunctive" || text == "pairwise_conjunctive") return TieRule::pairwise_conjunctive;
    throw ConfigError("unknown tie-change rule: \"" + std::string(text) + "\"");
}

void ModelSpec::validate() const {
    if (std::none_of(effects.begin(), effects.end(), [](const EffectSpec& e) { return e.kind == EffectKind::density; }))
        throw ConfigError("model must include the density effect");
    if (beta.size() != effects.size()) throw ConfigError("one parameter per effect is required");
    if (rates.empty()) throw ConfigError("model needs at least one period rate");
    for (auto r : rates)
        if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("rate parameters must be strictly positive");
    for (const auto& e : effects)
        if (!(e.gwesp_decay > 0.0)) throw ConfigError("gwesp decay must be positive");
}

const ActorCovariate* CovariateSet::find_actor(std::string_view name) const {
    for (const auto& c : actor)
        if (c.name() == name) return &c;
    return nullptr;
}

const DyadCovariate* CovariateSet::find_dyad(std::string_view name) const {
    for (const auto& c : dyad)
        if (c.name() == name) return &c;
    return nullptr;
}

// ---------------------------------------------------------------------------

EffectContext::EffectContext(std::vector<EffectSpec> effects, const CovariateSet& covs, int n)
    : effects_(std::move(effects)), bound_(effects_.size()), n_(n) {
    for (std::size_t k = 0; k < effects_.size(); ++k) {
        const auto& e = effects_[k];
        auto& b = bound_[k];
        if (!(e.gwesp_decay > 0.0)) throw ConfigError("gwesp decay must be positive");
        if (uses_actor_covariate(e.kind)) {
            b.actor = covs.find_actor(e.covariate);
            if (!b.actor) throw ConfigError("effect " + e.label() + ": covariate " + e.covariate + " not supplied");
            if (b.actor->actors() != n)
                throw ValidationError("covariate " + e.covariate + " has " + std::to_string(b.actor->actors()) +
                                      " actors, network has " + std::to_string(n));
            if (e.kind == EffectKind::simX) {
                if (!(b.actor->range() > 0.0))
                    throw ConfigError("simX(" + e.covariate + "): covariate is constant, similarity undefined");
                const auto& c = *b.actor;
                double sum = 0.0;
                std::size_t count = 0;
                for (int m = 0; m < c.periods(); ++m)
                    for (int i = 0; i < n; ++i) {
                        if (c.missing(i, m)) continue;
                        for (int j = i + 1; j < n; ++j) {
                            if (c.missing(j, m)) continue;
                            sum += 1.0 - std::abs(c.value(i, m) - c.value(j, m)) / c.range();
                            ++count;
                        }
                    }
                b.sim_mean = count ? sum / static_cast<double>(count) : 0.0;
            }
        } else if (uses_dyad_covariate(e.kind)) {
            b.dyad = covs.find_dyad(e.covariate);
            if (!b.dyad) throw ConfigError("effect " + e.label() + ": dyadic covariate " + e.covariate + " not supplied");
            if (b.dyad->actors() != n)
                throw ValidationError("dyadic covariate " + e.covariate + " has " + std::to_string(b.dyad->actors()) +
                                      " actors, network has " + std::to_string(n));
        }
    }
}

double EffectContext::centered_similarity(int k, int i, int j, int period) const {
    const auto& b = bound_.at(static_cast<std::size_t>(k));
    const auto& c = *b.actor;
    const int m = std::min(period, c.periods() - 1);
    return 1.0 - std::abs(c.imputed(i, m) - c.imputed(j, m)) / c.range() - b.sim_mean;
}

bool EffectContext::dyad_observed(int k, int i, int j, int period) const {
    const auto& b = bound_[static_cast<std::size_t>(k)];
    if (!b.actor) return true;
    const int m = std::min(period, b.actor->periods() - 1);
    return !b.actor->missing(i, m) && !b.actor->missing(j, m);
}

// Contribution of tie (i,j) to s_i for the dyadic-separable effects.
double EffectContext::dyad_term(int k, int i, int j, int period) const {
    const auto& e = effects_[static_cast<std::size_t>(k)];
    const auto& b = bound_[static_cast<std::size_t>(k)];
    switch (e.kind) {
        case EffectKind::egoPlusAltX:
        case EffectKind::egoPlusAltSqX: {
            const int m = std::min(period, b.actor->periods() - 1);
            const double v = b.actor->centered(i, m) + b.actor->centered(j, m);
            return e.kind == EffectKind::egoPlusAltX ? v : v * v;
        }
        case EffectKind::simX: return centered_similarity(k, i, j, period);
        case EffectKind::dyadX: return b.dyad->centered(i, j);
        default: return 1.0;
    }
}

std::vector<double> EffectContext::actor_statistics(int k, const Adjacency& x, int period, MissingPolicy policy) const {
    const auto& e = effects_.at(static_cast<std::size_t>(k));
    std::vector<double> s(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (int j : x.neighbors(i)) {
            switch (e.kind) {
                case EffectKind::density: acc += 1.0; break;
                case EffectKind::gwesp: acc += gwesp_weight(e.gwesp_decay, x.common_neighbors(i, j)); break;
                case EffectKind::degPlus: acc += x.degree(j); break;
                default:
                    if (policy == MissingPolicy::exclude && !dyad_observed(k, i, j, period)) break;
                    acc += dyad_term(k, i, j, period);
            }
        }
        s[static_cast<std::size_t>(i)] = acc;
    }
    return s;
}

double EffectContext::total_statistic(int k, const Adjacency& x, int period, MissingPolicy policy) const {
    const auto s = actor_statistics(k, x, period, policy);
    double t = 0.0;
    for (double v : s) t += v;
    return t;
}

double EffectContext::gwesp_change(const EffectSpec& e, const Adjacency& x, int i, int j) const {
    // Toggling (i,j) changes esp(i,j)'s own term and shifts esp(i,h) by one for
    // every neighbour h of i that is also a neighbour of j.
    const int sign = x.has(i, j) ? -1 : 1;
    double d = sign * gwesp_weight(e.gwesp_decay, x.common_neighbors(i, j));
    for (int h : x.neighbors(i)) {
        if (h == j || !x.has(j, h)) continue;
        const int esp = x.common_neighbors(i, h);
        d += gwesp_weight(e.gwesp_decay, esp + sign) - gwesp_weight(e.gwesp_decay, esp);
    }
    return d;
}

double EffectContext::change(int k, const Adjacency& x, int i, int j, int period) const {
    if (i == j) throw std::domain_error("change statistic of a self-tie");
    const auto& e = effects_.at(static_cast<std::size_t>(k));
    const bool present = x.has(i, j);
    const double sign = present ? -1.0 : 1.0;
    switch (e.kind) {
        case EffectKind::density: return sign;
        case EffectKind::degPlus: return present ? -x.degree(j) : x.degree(j) + 1.0;
        case EffectKind::gwesp: return gwesp_change(e, x, i, j);
        default: return sign * dyad_term(k, i, j, period);
    }
}

void EffectContext::change_row(int k, const Adjacency& x, int i, int period, std::span<double> out) const {
    const auto& e = effects_.at(static_cast<std::size_t>(k));
    if (e.kind != EffectKind::gwesp) {
        for (int j = 0; j < n_; ++j) out[static_cast<std::size_t>(j)] = j == i ? 0.0 : change(k, x, i, j, period);
        return;
    }
    // gwesp: share esp(i,h) over all candidate alters.
    const auto nbrs = x.neighbors(i);
    std::vector<double> gain(nbrs.size()), loss(nbrs.size());
    for (std::size_t a = 0; a < nbrs.size(); ++a) {
        const int esp = x.common_neighbors(i, nbrs[a]);
        const double w = gwesp_weight(e.gwesp_decay, esp);
        gain[a] = gwesp_weight(e.gwesp_decay, esp + 1) - w;
        loss[a] = gwesp_weight(e.gwesp_decay, esp - 1) - w;
    }
    for (int j = 0; j < n_; ++j) {
        if (j == i) {
            out[static_cast<std::size_t>(j)] = 0.0;
            continue;
        }
        const bool present = x.has(i, j);
        double d = (present ? -1.0 : 1.0) * gwesp_weight(e.gwesp_decay, x.common_neighbors(i, j));
        for (std::size_t a = 0; a < nbrs.size(); ++a) {
            const int h = nbrs[a];
            if (h == j || !x.has(j, h)) continue;
            d += present ? loss[a] : gain[a];
        }
        out[static_cast<std::size_t>(j)] = d;
    }
}

// ---------------------------------------------------------------------------

EffectStatistic statistic(const EffectSpec& effect, const BinaryNetwork& net, const CovariateSet& covs, int period,
                          MissingPolicy policy) {
    EffectContext ctx({effect}, covs, net.size());
    EffectStatistic out;
    out.per_actor = ctx.actor_statistics(0, net.x, period, policy);
    for (double v : out.per_actor) out.total += v;
    return out;
}

double change_statistic(const EffectSpec& effect, const BinaryNetwork& net, int i, int j, const CovariateSet& covs,
                        int period) {
    EffectContext ctx({effect}, covs, net.size());
    return ctx.change(0, net.x, i, j, period);
}

std::vector<double> target_statistics(const BinaryNetSeries& panel, const EffectContext& ctx) {
    if (panel.size() < 2) throw DegenerateInputError("target statistics need at least two waves");
    std::vector<double> t(static_cast<std::size_t>(ctx.size()), 0.0);
    for (std::size_t m = 0; m + 1 < panel.size(); ++m)
        for (int k = 0; k < ctx.size(); ++k)
            t[static_cast<std::size_t>(k)] +=
                ctx.total_statistic(k, panel[m + 1].x, static_cast<int>(m), MissingPolicy::exclude);
    return t;
}

}  // namespace netdyn
