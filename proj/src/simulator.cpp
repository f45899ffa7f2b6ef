#include "netdyn/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "netdyn/error.hpp"

namespace netdyn {

namespace {

double holding_time(Rng& rng, double total_rate) { return -std::log1p(-uniform01(rng)) / total_rate; }

[[noreturn]] void non_finite(const ModelSpec& model, int i, int j, int period, double value) {
    std::ostringstream msg;
    msg << "non-finite objective change " << value << " for actor " << i << " toggling " << j << " in period "
        << period << "; parameters:";
    for (std::size_t k = 0; k < model.effects.size(); ++k)
        msg << ' ' << model.effects[k].label() << '=' << model.beta[k];
    throw NumericalError(msg.str());
}

double logistic(double z) { return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

// f_i(x with x_ij present) - f_i(x with x_ij absent)
double tie_preference(const Adjacency& x, int i, int j, const ModelSpec& model, const EffectContext& ctx,
                      int period) {
    double d = 0.0;
    for (int k = 0; k < ctx.size(); ++k) {
        const double beta = model.beta[static_cast<std::size_t>(k)];
        if (beta != 0.0) d += beta * ctx.change(k, x, i, j, period);
    }
    if (!std::isfinite(d)) non_finite(model, i, j, period, d);
    return x.has(i, j) ? -d : d;
}

}  // namespace

void objective_changes(const Adjacency& x, int i, const ModelSpec& model, const EffectContext& ctx, int period,
                       std::span<double> out, std::span<double> scratch) {
    std::fill(out.begin(), out.end(), 0.0);
    for (int k = 0; k < ctx.size(); ++k) {
        const double beta = model.beta[static_cast<std::size_t>(k)];
        if (beta == 0.0) continue;
        ctx.change_row(k, x, i, period, scratch);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += beta * scratch[j];
    }
    out[static_cast<std::size_t>(i)] = 0.0;
    for (std::size_t j = 0; j < out.size(); ++j)
        if (!std::isfinite(out[j])) non_finite(model, i, static_cast<int>(j), period, out[j]);
}

std::vector<double> option_probabilities(const Adjacency& x, int i, const ModelSpec& model, const EffectContext& ctx,
                                         int period) {
    const auto n = static_cast<std::size_t>(x.size());
    std::vector<double> f(n), scratch(n);
    objective_changes(x, i, model, ctx, period, f, scratch);
    const double top = *std::max_element(f.begin(), f.end());
    double z = 0.0;
    for (auto& v : f) z += (v = std::exp(v - top));
    for (auto& v : f) v /= z;
    return f;
}

bool ministep(SimState& state, const ModelSpec& model, const EffectContext& ctx, double horizon) {
    const int n = state.x.size();
    const double rate = model.rates.at(static_cast<std::size_t>(state.period));
    const double next = state.time + holding_time(state.rng, n * rate);
    if (next >= horizon) {
        state.time = horizon;
        return false;
    }
    state.time = next;
    ++state.ministeps;

    const int i = uniform_index(state.rng, n);
    if (model.rule == TieRule::pairwise_conjunctive) {
        int j = uniform_index(state.rng, n - 1);
        if (j >= i) ++j;
        const double u = uniform01(state.rng);
        const double pi = logistic(tie_preference(state.x, i, j, model, ctx, state.period));
        const double pj = logistic(tie_preference(state.x, j, i, model, ctx, state.period));
        state.x.set(i, j, u < pi * pj);
        return true;
    }

    state.row.resize(static_cast<std::size_t>(n));
    state.objective.resize(static_cast<std::size_t>(n));
    objective_changes(state.x, i, model, ctx, state.period, state.objective, state.row);
    const double top = *std::max_element(state.objective.begin(), state.objective.end());
    double z = 0.0;
    for (auto& v : state.objective) z += (v = std::exp(v - top));
    double u = uniform01(state.rng) * z;
    int choice = n - 1;
    for (int j = 0; j < n; ++j) {
        u -= state.objective[static_cast<std::size_t>(j)];
        if (u < 0.0) {
            choice = j;
            break;
        }
    }
    if (choice != i) state.x.toggle(i, choice);
    return true;
}

PeriodOutcome simulate_period(const Adjacency& start, const ModelSpec& model, const EffectContext& ctx, int period,
                              std::uint64_t seed) {
    if (period < 0 || period >= model.period_count()) throw ConfigError("period index out of range");
    if (!(model.rates[static_cast<std::size_t>(period)] > 0.0)) throw ConfigError("rate parameter must be positive");
    if (start.size() < 2) throw DegenerateInputError("simulation needs at least two actors");
    SimState state(start, period, seed);
    while (ministep(state, model, ctx, 1.0)) {
        if (state.ministeps > max_ministeps_per_period)
            throw RunawayRateError("period " + std::to_string(period) + " exceeded " +
                                   std::to_string(max_ministeps_per_period) + " ministeps (rate " +
                                   std::to_string(model.rates[static_cast<std::size_t>(period)]) + ")");
    }
    PeriodOutcome out;
    out.hamming = state.x.hamming(start);
    out.ministeps = state.ministeps;
    out.statistics.resize(static_cast<std::size_t>(ctx.size()));
    for (int k = 0; k < ctx.size(); ++k)
        out.statistics[static_cast<std::size_t>(k)] = ctx.total_statistic(k, state.x, period, MissingPolicy::exclude);
    out.end = std::move(state.x);
    return out;
}

PeriodOutcome simulate_period(const BinaryNetwork& start, const ModelSpec& model, const EffectContext& ctx, int period,
                              std::uint64_t seed) {
    return simulate_period(start.x, model, ctx, period, seed);
}

BinaryNetSeries simulate_panel(const BinaryNetwork& start, const ModelSpec& model, const EffectContext& ctx,
                               std::uint64_t seed) {
    model.validate();
    BinaryNetSeries panel{start};
    for (int m = 0; m < model.period_count(); ++m) {
        auto out = simulate_period(panel.back().x, model, ctx, m, derive_seed(seed, {static_cast<std::uint64_t>(m)}));
        panel.emplace_back(start.actors, start.year + m + 1, std::move(out.end));
    }
    return panel;
}

Adjacency random_graph(int n, double p, Rng& rng) {
    Adjacency x(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (uniform01(rng) < p) x.set(i, j, true);
    return x;
}

}  // namespace netdyn
