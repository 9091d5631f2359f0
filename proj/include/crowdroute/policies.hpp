#pragma once

#include <random>

#include "crowdroute/config.hpp"
#include "crowdroute/model.hpp"
#include "crowdroute/planner.hpp"

namespace crowdroute {

enum class PolicyKind {
    Myopic,
    SocialOptimal,
    Hiding,
    Sid,
};

/// Which routing rule drives a trajectory. SocialOptimal and Sid replan
/// with `planner` at every step (receding horizon).
struct PolicySpec {
    PolicyKind kind = PolicyKind::Myopic;
    PlannerConfig planner;

    bool needs_planner() const {
        return kind == PolicyKind::SocialOptimal || kind == PolicyKind::Sid;
    }
};

/// What the selective-disclosure mechanism did for one arrival.
struct RoutingOutcome {
    int action = 0;         // path the user actually takes
    bool disclosed = false; // whether the latency vector was shown
    int recommendation = 0; // the planner's optimal action, always attached
};

/// Risky path with the smallest expected latency, ties to the lowest index.
/// Returns a 1-based path index.
int best_risky_path(const SystemState& state);

/// Selfish rule: safe path when the best risky expected latency is >= ell0
/// (ties stay safe), otherwise the best risky path.
int myopic_route(const SystemState& state);

/// Whether the uninformed user's routing is randomized, i.e. the stationary
/// belief sits below the indifference belief.
bool hiding_is_randomized(const NetworkConfig& cfg);

/// Routing of a user who sees no platform data: safe path when the
/// stationary expected coefficient is at least alpha, otherwise a uniformly
/// random risky path.
int hiding_route(const NetworkConfig& cfg, std::mt19937_64& rng);

/// Selective information disclosure. Discloses exactly when the planner
/// recommends the safe path while an uninformed user would explore with
/// positive probability; a disclosed user best-responds myopically, an
/// undisclosed user follows the recommendation.
RoutingOutcome sid_route(const SystemState& state, const NetworkConfig& cfg,
                         const PlannerConfig& pcfg);

} // namespace crowdroute
