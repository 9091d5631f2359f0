#pragma once

#include <cstdint>

namespace crowdroute {

/// Static parameters of the parallel routing network: one safe path whose
/// latency carries over with coefficient alpha, and n_risky stochastic paths
/// whose coefficient alternates between alpha_low and alpha_high under a
/// two-state Markov chain (self-transition probabilities q_ll, q_hh).
/// Travellers on a risky path report a hazard with probability p_h (high
/// state) or p_l (low state). Each arrival adds delta_ell to the chosen path.
struct NetworkConfig {
    int n_risky = 1;
    double alpha = 0.6;
    double alpha_low = 0.2;
    double alpha_high = 1.2;
    double q_ll = 0.5;
    double q_hh = 0.5;
    double p_h = 0.8;
    double p_l = 0.3;
    double delta_ell = 2.0;
    double rho = 0.9;

    /// Throws config_error naming the first violated field.
    void validate() const;
};

/// Long-run probability of the high-coefficient state,
/// (1 - q_ll) / (2 - q_ll - q_hh). Requires q_ll + q_hh < 2.
double stationary_belief(const NetworkConfig& cfg);

/// Belief at which a risky path's expected coefficient equals the safe
/// path's alpha: (alpha - alpha_low) / (alpha_high - alpha_low).
double indifference_belief(const NetworkConfig& cfg);

enum class TerminalValueMode {
    Zero,       // truncated tree ends with value 0
    Perpetuity, // ends with min current latency / (1 - rho)
};

/// Lookahead settings for the finite-horizon expectimax planner and the
/// threshold bisection built on top of it.
struct PlannerConfig {
    int horizon = 5;
    TerminalValueMode terminal_mode = TerminalValueMode::Zero;
    double bisection_tol = 1e-9;
    double bracket_cap = 1e4;
    std::uint64_t node_cap = 20'000'000;

    void validate() const;
};

/// A user driving their chosen path's latency above this aborts the run
/// with divergence_error. Bookkeeping latencies of paths nobody travels may
/// grow past it (expected with alpha_high >= 1 and a sticky chain); they
/// are never routed to and relax on their own.
inline constexpr double kLatencyDivergenceGuard = 1e15;

/// Hard ceiling for any stored latency, travelled or not; beyond this the
/// double-precision bookkeeping itself is at risk.
inline constexpr double kLatencyOverflowAbort = 1e300;

} // namespace crowdroute
