#pragma once

// Continuous-time ministep simulation of undirected network change between
// two observation waves.

#include <cstdint>
#include <limits>
#include <vector>

#include "netdyn/effects.hpp"
#include "netdyn/panel.hpp"
#include "netdyn/rng.hpp"

namespace netdyn {

inline constexpr std::int64_t max_ministeps_per_period = 10'000'000;

struct SimState {
    Adjacency x;
    double time = 0.0;
    int period = 0;
    Rng rng;
    std::int64_t ministeps = 0;

    SimState(Adjacency start, int period, std::uint64_t seed) : x(std::move(start)), period(period), rng(seed) {}

    // scratch, reused across ministeps
    std::vector<double> row;
    std::vector<double> objective;
};

/// Multinomial-logit choice probabilities of actor i over its n options:
/// entry j != i is "toggle (i,j)", entry i is "keep". Forcing rule only.
std::vector<double> option_probabilities(const Adjacency& x, int i, const ModelSpec& model,
                                         const EffectContext& ctx, int period);

/// Objective change f_i(x with x_ij toggled) - f_i(x) for every j (0 at j = i).
void objective_changes(const Adjacency& x, int i, const ModelSpec& model, const EffectContext& ctx, int period,
                       std::span<double> out, std::span<double> scratch);

/// Draws a holding time at total rate n * rate(period). If the next event
/// falls at or past `horizon`, clamps time to the horizon and returns false
/// without changing x; otherwise performs one ministep and returns true.
bool ministep(SimState& state, const ModelSpec& model, const EffectContext& ctx,
              double horizon = std::numeric_limits<double>::infinity());

struct PeriodOutcome {
    Adjacency end;
    std::vector<double> statistics;  ///< per-effect totals on `end`, missing dyads excluded
    std::int64_t hamming = 0;        ///< dyads changed relative to the start
    std::int64_t ministeps = 0;
};

/// Runs ministeps from `start` over one unit-length period. Bit-reproducible
/// for a fixed seed; throws RunawayRateError past max_ministeps_per_period.
PeriodOutcome simulate_period(const Adjacency& start, const ModelSpec& model, const EffectContext& ctx, int period,
                              std::uint64_t seed);
PeriodOutcome simulate_period(const BinaryNetwork& start, const ModelSpec& model, const EffectContext& ctx,
                              int period, std::uint64_t seed);

/// Synthetic panel: wave m+1 is the simulated end of period m started from
/// wave m. Years count up from the start wave's year.
BinaryNetSeries simulate_panel(const BinaryNetwork& start, const ModelSpec& model, const EffectContext& ctx,
                               std::uint64_t seed);

/// Bernoulli random graph, for start waves of synthetic panels.
Adjacency random_graph(int n, double p, Rng& rng);

}  // namespace netdyn
