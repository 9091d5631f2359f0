#include "crowdroute/policies.hpp"

#include <algorithm>
#include <stdexcept>

namespace crowdroute {

int best_risky_path(const SystemState& state) {
    if (state.ell_risky.empty())
        throw std::invalid_argument("best_risky_path: no risky paths");
    std::size_t best = 0;
    for (std::size_t k = 1; k < state.ell_risky.size(); ++k)
        if (state.ell_risky[k] < state.ell_risky[best]) best = k;
    return static_cast<int>(best) + 1;
}

int myopic_route(const SystemState& state) {
    const int best = best_risky_path(state);
    const double best_ell = state.ell_risky[static_cast<std::size_t>(best - 1)];
    return best_ell >= state.ell0 ? 0 : best;
}

bool hiding_is_randomized(const NetworkConfig& cfg) {
    return stationary_belief(cfg) < indifference_belief(cfg);
}

int hiding_route(const NetworkConfig& cfg, std::mt19937_64& rng) {
    if (!hiding_is_randomized(cfg)) return 0;
    const double u = uniform01(rng);
    const int pick = 1 + static_cast<int>(u * cfg.n_risky);
    return std::min(pick, cfg.n_risky);
}

RoutingOutcome sid_route(const SystemState& state, const NetworkConfig& cfg,
                         const PlannerConfig& pcfg) {
    RoutingOutcome out;
    out.recommendation = optimal_plan(state, cfg, pcfg).action;
    out.disclosed = out.recommendation == 0 && hiding_is_randomized(cfg);
    out.action = out.disclosed ? myopic_route(state) : out.recommendation;
    return out;
}

} // namespace crowdroute
