#include "crowdroute/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "crowdroute/errors.hpp"

namespace crowdroute {

namespace {

// Scratch states per depth so the tree walk never allocates.
struct Workspace {
    std::vector<SystemState> scratch; // two slots per depth: y=1 and y=0 children
    std::uint64_t nodes = 0;
    std::uint64_t node_cap = 0;

    Workspace(int horizon, int n_risky, std::uint64_t cap) : node_cap(cap) {
        scratch.resize(2 * static_cast<std::size_t>(horizon) + 2);
        for (auto& s : scratch) {
            s.ell_risky.resize(static_cast<std::size_t>(n_risky));
            s.beliefs.resize(static_cast<std::size_t>(n_risky));
        }
    }

    void count_node() {
        if (++nodes > node_cap)
            throw node_cap_error(
                "optimal_plan: expectimax tree exceeded the node cap; "
                "reduce the planner horizon or the number of risky paths");
    }
};

double terminal_value(const SystemState& state, const NetworkConfig& cfg,
                      const PlannerConfig& pcfg) {
    if (pcfg.terminal_mode == TerminalValueMode::Zero) return 0.0;
    double m = state.ell0;
    for (double v : state.ell_risky) m = std::min(m, v);
    return m / (1.0 - cfg.rho);
}

double best_value(const SystemState& state, int steps_left, const NetworkConfig& cfg,
                  const PlannerConfig& pcfg, Workspace& ws);

// Continuation value of one observation branch. A branch that would drive
// the travelled latency past the divergence guard is an unplayable future;
// it evaluates to +infinity and loses every comparison.
double branch_value(const SystemState& state, int action, const Observation& obs,
                    int steps_left, const NetworkConfig& cfg, const PlannerConfig& pcfg,
                    Workspace& ws, SystemState& child) {
    try {
        transition_into(state, action, obs, cfg, child);
        return best_value(child, steps_left - 1, cfg, pcfg, ws);
    } catch (const divergence_error&) {
        return std::numeric_limits<double>::infinity();
    }
}

// Immediate latency of `action` plus discounted expected continuation.
double action_value(const SystemState& state, int action, int steps_left,
                    const NetworkConfig& cfg, const PlannerConfig& pcfg, Workspace& ws) {
    const std::size_t slot = 2 * static_cast<std::size_t>(steps_left);
    if (action == 0) {
        double q = state.ell0;
        if (steps_left > 1 || pcfg.terminal_mode == TerminalValueMode::Perpetuity) {
            q += cfg.rho * branch_value(state, 0, Observation::none(), steps_left, cfg, pcfg,
                                        ws, ws.scratch[slot]);
        }
        return q;
    }

    const std::size_t k = static_cast<std::size_t>(action - 1);
    double q = state.ell_risky[k];
    if (steps_left > 1 || pcfg.terminal_mode == TerminalValueMode::Perpetuity) {
        const double p1 = hazard_probability(state.beliefs[k], cfg);
        const double p0 = 1.0 - p1;
        double expected = 0.0;
        if (p1 > 0.0)
            expected += p1 * branch_value(state, action,
                                          Observation::on_path(action, Outcome::Hazard),
                                          steps_left, cfg, pcfg, ws, ws.scratch[slot]);
        if (p0 > 0.0)
            expected += p0 * branch_value(state, action,
                                          Observation::on_path(action, Outcome::NoHazard),
                                          steps_left, cfg, pcfg, ws, ws.scratch[slot + 1]);
        q += cfg.rho * expected;
    }
    return q;
}

double best_value(const SystemState& state, int steps_left, const NetworkConfig& cfg,
                  const PlannerConfig& pcfg, Workspace& ws) {
    ws.count_node();
    if (steps_left == 0) return terminal_value(state, cfg, pcfg);
    double best = std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(state.ell_risky.size());
    for (int a = 0; a <= n; ++a) {
        const double q = action_value(state, a, steps_left, cfg, pcfg, ws);
        if (q < best) best = q;
    }
    return best;
}

} // namespace

PlanResult optimal_plan(const SystemState& state, const NetworkConfig& cfg,
                        const PlannerConfig& pcfg) {
    pcfg.validate();
    state.validate(cfg);
    Workspace ws(pcfg.horizon, cfg.n_risky, pcfg.node_cap);

    PlanResult result;
    result.q_values.resize(static_cast<std::size_t>(cfg.n_risky) + 1);
    result.cost = std::numeric_limits<double>::infinity();
    result.action = 0;
    for (int a = 0; a <= cfg.n_risky; ++a) {
        const double q = action_value(state, a, pcfg.horizon, cfg, pcfg, ws);
        if (std::isnan(q))
            throw numeric_error("optimal_plan: NaN encountered in expectimax");
        result.q_values[static_cast<std::size_t>(a)] = q;
        if (q < result.cost) {
            result.cost = q;
            result.action = a;
        }
    }
    return result;
}

double q_value(const SystemState& state, int action, const NetworkConfig& cfg,
               const PlannerConfig& pcfg) {
    pcfg.validate();
    state.validate(cfg);
    if (action < 0 || action > cfg.n_risky)
        throw std::invalid_argument("q_value: action out of range");
    Workspace ws(pcfg.horizon, cfg.n_risky, pcfg.node_cap);
    return action_value(state, action, pcfg.horizon, cfg, pcfg, ws);
}

double myopic_threshold(const SystemState& state) { return state.ell0; }

double exploration_threshold(const SystemState& state, int path,
                             const NetworkConfig& cfg, const PlannerConfig& pcfg) {
    if (path < 1 || path > cfg.n_risky)
        throw std::invalid_argument("exploration_threshold: risky path index out of range");

    SystemState probe = state;
    const std::size_t k = static_cast<std::size_t>(path - 1);
    // Cost gap of exploring at hypothetical latency z; <= 0 means exploring
    // is weakly preferred. Monotone in z: costs grow with any path's latency.
    const auto gap = [&](double z) {
        probe.ell_risky[k] = z;
        const double g = q_value(probe, path, cfg, pcfg) - q_value(probe, 0, cfg, pcfg);
        if (std::isnan(g))
            throw numeric_error("exploration_threshold: NaN in cost gap");
        return g;
    };

    double lo = 0.0;
    double hi = pcfg.bracket_cap;
    const double g_lo = gap(lo);
    const double g_hi = gap(hi);
    if (g_lo > 0.0 && g_hi > 0.0) return 0.0;  // safe path wins everywhere
    if (g_lo <= 0.0 && g_hi <= 0.0) return hi; // exploring wins everywhere
    if (g_lo > 0.0 && g_hi <= 0.0)
        throw bracket_error(
            "exploration_threshold: cost gap decreases across the bracket; "
            "expected a monotone increasing gap");

    while (hi - lo > pcfg.bisection_tol) {
        const double mid = 0.5 * (lo + hi);
        if (gap(mid) <= 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

CrossingResult belief_crossing(const NetworkConfig& cfg, const SystemState& template_state,
                               int grid_points, const PlannerConfig& pcfg) {
    if (cfg.n_risky != 1)
        throw std::invalid_argument("belief_crossing: needs a single-risky-path template");
    if (grid_points < 2)
        throw std::invalid_argument("belief_crossing: grid_points must be >= 2");

    // Differences within the bisection tolerance count as zero; the two
    // thresholds are only resolved to that precision.
    const auto classify = [&](double diff) {
        if (diff > pcfg.bisection_tol) return 1;
        if (diff < -pcfg.bisection_tol) return -1;
        return 0;
    };

    CrossingResult result;
    SystemState probe = template_state;
    double prev_x = 0.0;
    int prev_sign = 0;
    bool have_sign = false;
    for (int i = 0; i < grid_points; ++i) {
        const double x = static_cast<double>(i) / (grid_points - 1);
        probe.beliefs[0] = x;
        const double diff =
            exploration_threshold(probe, 1, cfg, pcfg) - myopic_threshold(probe);
        const int sign = classify(diff);
        if (sign != 0) {
            if (have_sign && sign != prev_sign) {
                result.found = true;
                result.x_low = prev_x;
                result.x_high = x;
                result.x_cross = 0.5 * (prev_x + x);
                return result;
            }
            prev_sign = sign;
            prev_x = x;
            have_sign = true;
        }
    }
    return result;
}

} // namespace crowdroute
