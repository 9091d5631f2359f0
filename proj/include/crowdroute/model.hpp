#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "crowdroute/config.hpp"

namespace crowdroute {

/// What a traveller on a risky path reported, if anything.
enum class Outcome : std::uint8_t {
    NoHazard = 0, // y = 0
    Hazard = 1,   // y = 1
    None = 2,     // y = empty: nobody travelled there
};

/// Per-slot observation set. At most one path carries a report because a
/// single atomic user arrives per slot, so we store that one entry.
struct Observation {
    int path = 0;                   // risky path index 1..N when non-empty
    Outcome outcome = Outcome::None;

    static Observation none() { return {}; }
    static Observation on_path(int path, Outcome outcome) { return {path, outcome}; }

    bool empty() const { return outcome == Outcome::None; }
    Outcome outcome_at(int risky_path) const {
        return (!empty() && path == risky_path) ? outcome : Outcome::None;
    }
};

/// Platform-side state: safe-path latency, per-risky-path expected latency
/// conditioned on the report history, and per-risky-path hazard belief.
struct SystemState {
    double ell0 = 0.0;
    std::vector<double> ell_risky;
    std::vector<double> beliefs;
    std::int64_t t = 0;

    static SystemState make(double ell0, std::vector<double> ell_risky,
                            std::vector<double> beliefs, std::int64_t t = 0);

    /// Throws std::invalid_argument on size mismatch, negative or
    /// non-finite latencies, or beliefs outside [0,1].
    void validate(const NetworkConfig& cfg) const;
};

/// Ground-truth coefficient states, used only in ground-truth simulation
/// mode; high[i] != 0 means risky path i+1 currently has alpha_high.
struct HiddenTruth {
    std::vector<std::uint8_t> high;
};

enum class SimulationMode {
    Belief,      // observations drawn from the platform's own belief
    GroundTruth, // observations drawn from a simulated hidden chain
};

/// Deterministic uniform in [0,1) from the raw 64-bit stream; avoids
/// std::uniform_real_distribution, which is not bit-stable across
/// standard libraries.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Seed for an individual Monte Carlo run, mixed from the master seed and
/// the run index (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t run_index);

/// Bayes update of a hazard belief given a reported outcome (must not be
/// None). A degenerate denominator returns the prior unchanged and sets
/// *degenerate when provided.
double posterior_belief(double x, Outcome y, const NetworkConfig& cfg,
                        bool* degenerate = nullptr);

/// One step of the hidden chain applied to a posterior belief:
/// x' * q_hh + (1 - x') * (1 - q_ll).
double propagate_belief(double x_post, const NetworkConfig& cfg);

/// Posterior expected coefficient x' * alpha_high + (1 - x') * alpha_low.
double expected_coefficient(double x_post, const NetworkConfig& cfg);

/// Safe-path latency recursion: alpha * ell0, plus delta_ell if chosen.
double step_safe_latency(double ell0, bool chosen, const NetworkConfig& cfg);

/// Risky-path expected-latency recursion: E[alpha | x_post] * ell, plus
/// delta_ell if chosen.
double step_risky_latency(double ell, double x_post, bool chosen,
                          const NetworkConfig& cfg);

/// Probability of a hazard report given prior belief x:
/// (1 - x) * p_l + x * p_h.
double hazard_probability(double x, const NetworkConfig& cfg);

/// Applies the full one-slot update: Bayes on the observed path, latency
/// recursions on all N+1 paths, chain propagation on all beliefs, t+1.
/// Writes into `out` without allocating when it is already sized.
void transition_into(const SystemState& state, int action, const Observation& obs,
                     const NetworkConfig& cfg, SystemState& out);

SystemState transition(const SystemState& state, int action, const Observation& obs,
                       const NetworkConfig& cfg);

/// Draws the observation produced by routing `action`. Belief mode draws a
/// hazard with probability hazard_probability(x_i); ground-truth mode uses
/// p_h or p_l according to the true state of the chosen path.
Observation sample_observation(const SystemState& state, const HiddenTruth* truth,
                               int action, SimulationMode mode, const NetworkConfig& cfg,
                               std::mt19937_64& rng);

/// Advances every path's true coefficient state one chain step.
HiddenTruth step_truth(const HiddenTruth& truth, const NetworkConfig& cfg,
                       std::mt19937_64& rng);

/// Samples an initial truth with P(high_i) = beliefs[i].
HiddenTruth sample_truth(const std::vector<double>& beliefs, std::mt19937_64& rng);

} // namespace crowdroute
