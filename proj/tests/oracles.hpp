// Test-only reference implementations, deliberately independent of the
// library's recursive code paths: exhaustive enumeration over hidden-state
// sequences and over complete contingency plans.
#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "crowdroute/config.hpp"
#include "crowdroute/model.hpp"

namespace crowdroute::oracle {

/// One step of a recorded history on a single-risky-path network.
struct HistoryStep {
    bool explored = false;          // action 1 vs action 0
    Outcome outcome = Outcome::None; // meaningful only when explored
};

/// Exact P(high state at slot T+1 | history), by summing over all 2^T hidden
/// sequences weighted by chain transitions and observation likelihoods.
inline double exact_filter_posterior(double x0, const std::vector<HistoryStep>& history,
                                     const NetworkConfig& cfg) {
    const std::size_t T = history.size();
    const double q_lh = 1.0 - cfg.q_ll;
    double weighted_high = 0.0;
    double total = 0.0;
    for (std::uint64_t bits = 0; bits < (1ULL << T); ++bits) {
        double w = 1.0;
        bool prev_high = false;
        for (std::size_t t = 0; t < T; ++t) {
            const bool high = (bits >> t) & 1ULL;
            if (t == 0)
                w *= high ? x0 : 1.0 - x0;
            else
                w *= prev_high ? (high ? cfg.q_hh : 1.0 - cfg.q_hh)
                               : (high ? q_lh : cfg.q_ll);
            if (history[t].explored) {
                const double p = high ? cfg.p_h : cfg.p_l;
                w *= history[t].outcome == Outcome::Hazard ? p : 1.0 - p;
            }
            prev_high = high;
        }
        const double p_next_high = prev_high ? cfg.q_hh : q_lh;
        weighted_high += w * p_next_high;
        total += w;
    }
    if (total <= 0.0) return x0; // measure-zero history under these parameters
    return weighted_high / total;
}

/// A complete contingency plan: an action now and, per possible branch, a
/// subplan. Routing safe has one branch; routing risky has two (hazard
/// observed first, then not observed).
struct Plan {
    int action = 0;
    std::vector<Plan> subs;
};

inline std::vector<Plan> enumerate_plans(int depth, int n_risky) {
    if (depth == 0) return {Plan{}};
    const std::vector<Plan> shorter = enumerate_plans(depth - 1, n_risky);
    std::vector<Plan> plans;
    for (const Plan& sub : shorter) plans.push_back(Plan{0, {sub}});
    for (int a = 1; a <= n_risky; ++a)
        for (const Plan& on_hazard : shorter)
            for (const Plan& on_clear : shorter)
                plans.push_back(Plan{a, {on_hazard, on_clear}});
    return plans;
}

inline double plan_cost(const Plan& plan, const SystemState& state, int depth,
                        const NetworkConfig& cfg) {
    if (depth == 0) return 0.0; // zero terminal convention
    if (plan.action == 0) {
        const SystemState child = transition(state, 0, Observation::none(), cfg);
        return state.ell0 + cfg.rho * plan_cost(plan.subs[0], child, depth - 1, cfg);
    }
    const std::size_t k = static_cast<std::size_t>(plan.action - 1);
    const double p1 = hazard_probability(state.beliefs[k], cfg);
    const SystemState child1 =
        transition(state, plan.action, Observation::on_path(plan.action, Outcome::Hazard), cfg);
    const SystemState child0 =
        transition(state, plan.action, Observation::on_path(plan.action, Outcome::NoHazard), cfg);
    return state.ell_risky[k] +
           cfg.rho * (p1 * plan_cost(plan.subs[0], child1, depth - 1, cfg) +
                      (1.0 - p1) * plan_cost(plan.subs[1], child0, depth - 1, cfg));
}

/// Minimal expected cost over every complete contingency plan of `depth`
/// steps (zero terminal value).
inline double best_plan_cost(const SystemState& state, int depth, const NetworkConfig& cfg) {
    double best = std::numeric_limits<double>::infinity();
    for (const Plan& plan : enumerate_plans(depth, static_cast<int>(state.ell_risky.size())))
        best = std::min(best, plan_cost(plan, state, depth, cfg));
    return best;
}

/// Exact expected discounted cost of a deterministic state-feedback policy
/// over the observation branch tree (zero terminal value).
template <typename PolicyFn>
double exact_policy_cost(const SystemState& state, int depth, const NetworkConfig& cfg,
                         PolicyFn&& policy) {
    if (depth == 0) return 0.0;
    const int action = policy(state);
    if (action == 0) {
        const SystemState child = transition(state, 0, Observation::none(), cfg);
        return state.ell0 + cfg.rho * exact_policy_cost(child, depth - 1, cfg, policy);
    }
    const std::size_t k = static_cast<std::size_t>(action - 1);
    const double p1 = hazard_probability(state.beliefs[k], cfg);
    double expected = 0.0;
    if (p1 > 0.0) {
        const SystemState child =
            transition(state, action, Observation::on_path(action, Outcome::Hazard), cfg);
        expected += p1 * exact_policy_cost(child, depth - 1, cfg, policy);
    }
    if (p1 < 1.0) {
        const SystemState child =
            transition(state, action, Observation::on_path(action, Outcome::NoHazard), cfg);
        expected += (1.0 - p1) * exact_policy_cost(child, depth - 1, cfg, policy);
    }
    const double immediate = state.ell_risky[k];
    return immediate + cfg.rho * expected;
}

/// Largest min-current-latency over every state reachable within `depth`
/// steps under any action/observation sequence; a per-instance scale for
/// horizon-truncation error.
inline double max_reachable_min_latency(const SystemState& state, int depth,
                                        const NetworkConfig& cfg) {
    double m = state.ell0;
    for (double v : state.ell_risky) m = std::min(m, v);
    if (depth == 0) return m;
    double worst = m;
    const int n = static_cast<int>(state.ell_risky.size());
    for (int a = 0; a <= n; ++a) {
        if (a == 0) {
            const SystemState child = transition(state, 0, Observation::none(), cfg);
            worst = std::max(worst, max_reachable_min_latency(child, depth - 1, cfg));
        } else {
            for (Outcome y : {Outcome::Hazard, Outcome::NoHazard}) {
                const SystemState child =
                    transition(state, a, Observation::on_path(a, y), cfg);
                worst = std::max(worst, max_reachable_min_latency(child, depth - 1, cfg));
            }
        }
    }
    return worst;
}

} // namespace crowdroute::oracle
