#pragma once

#include <vector>

#include "crowdroute/config.hpp"
#include "crowdroute/model.hpp"

namespace crowdroute {

/// Result of one expectimax evaluation from a root state.
struct PlanResult {
    double cost = 0.0;             // min over q_values
    int action = 0;                // argmin, ties toward 0 then lowest index
    std::vector<double> q_values;  // size N+1, indexed by action
};

/// Socially optimal action and cost over a finite lookahead: exact
/// discounted expectimax over the belief MDP. Routing to the safe path is a
/// deterministic branch; routing to risky path i branches on the hazard
/// report with probabilities from hazard_probability on the prior belief.
/// Throws node_cap_error when the tree would exceed pcfg.node_cap.
PlanResult optimal_plan(const SystemState& state, const NetworkConfig& cfg,
                        const PlannerConfig& pcfg);

/// Cost of taking `action` now and playing optimally afterwards.
double q_value(const SystemState& state, int action, const NetworkConfig& cfg,
               const PlannerConfig& pcfg);

/// Largest hypothetical expected latency z on risky `path` at which routing
/// there is still weakly preferred to the safe path, found by bisection of
/// q_value(state with ell_path := z, path) - q_value(same state, 0) over
/// [0, bracket_cap]. Returns 0 when the safe path wins everywhere on the
/// bracket and bracket_cap when the risky path always wins.
double exploration_threshold(const SystemState& state, int path,
                             const NetworkConfig& cfg, const PlannerConfig& pcfg);

/// The myopic policy explores exactly below the current safe latency.
double myopic_threshold(const SystemState& state);

/// Location of the sign change of exploration_threshold - myopic_threshold
/// over a belief grid for a single-risky-path template state.
struct CrossingResult {
    bool found = false;
    double x_low = 0.0;   // last grid point before the flip
    double x_high = 0.0;  // first grid point after the flip
    double x_cross = 0.0; // midpoint of the bracketing cell
};

/// Scans x_1 over `grid_points` equally spaced beliefs in [0,1] and reports
/// the first grid cell where the threshold difference changes sign. A
/// missing crossing is a valid outcome, reported with found = false.
CrossingResult belief_crossing(const NetworkConfig& cfg, const SystemState& template_state,
                               int grid_points, const PlannerConfig& pcfg);

} // namespace crowdroute
