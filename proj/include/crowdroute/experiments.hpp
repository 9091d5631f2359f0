#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "crowdroute/config.hpp"
#include "crowdroute/model.hpp"
#include "crowdroute/policies.hpp"

namespace crowdroute {

/// One simulated arrival: state seen, action taken, what happened.
struct TrajectoryStep {
    std::int64_t t = 0;
    double ell0 = 0.0;
    std::vector<double> ell_risky;
    std::vector<double> beliefs;
    int action = 0;
    bool disclosed = false;
    Observation obs;
    double latency = 0.0; // expected latency of the chosen path at decision time
};

struct TrajectoryRecord {
    std::vector<TrajectoryStep> steps;
    double total_discounted_cost = 0.0;
    std::uint64_t seed = 0;
    PolicySpec policy;
    SimulationMode mode = SimulationMode::Belief;
};

/// Side of a bound check carried by a RatioReport.
enum class BoundKind {
    LowerBound,  // ratio must reach slack * bound
    UpperBound,  // ratio must stay at or below bound
    MatchWithin, // ratio must agree with bound to relative slack
};

/// A worst-case construction's outcome against its theoretical bound. A
/// report with satisfied == false is a hard failure for the caller, not a
/// log line.
struct RatioReport {
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
    double bound = 0.0;
    std::string bound_name;
    BoundKind bound_kind = BoundKind::UpperBound;
    double slack = 1.0;
    bool satisfied = false;
    std::vector<std::pair<std::string, double>> parameters;
};

/// Monte Carlo estimate of the average inefficiency ratio: ratio of mean
/// discounted costs over paired seeds, with a delta-method standard error.
struct GammaEstimate {
    double gamma = 0.0;
    double std_error = 0.0;
    int runs = 0;
    std::vector<double> policy_costs;
    std::vector<double> optimal_costs;
};

/// Per-belief threshold comparison row.
struct ThresholdPoint {
    double x = 0.0;
    double ell_myopic = 0.0;
    double ell_optimal = 0.0;
};

/// Near-limit stand-ins for the worst-case constructions' boundary
/// parameters; the exact limits break probability normalization.
struct LimitOffsets {
    double offset = 1e-3;     // latency-scale offsets such as delta_ell / ell0
    double prob_limit = 1e-6; // probabilities pushed toward 0 or 1
};

/// Smallest T >= 1 with rho^T below `tail`.
int truncation_horizon(double rho, double tail = 1e-6);

/// Sum of rho^t over t in [from, to), accumulated in index order.
double discounted_sum(double rho, int from, int to);

/// Simulates `horizon` arrivals under `policy` from `initial`, sampling
/// observations in the given mode. Deterministic in (inputs, seed).
TrajectoryRecord run_trajectory(const NetworkConfig& cfg, const PolicySpec& policy,
                                const SystemState& initial, int horizon,
                                std::uint64_t seed, SimulationMode mode);

/// Independent re-accumulation of a record's discounted cost.
double discounted_cost(const TrajectoryRecord& record, double rho);

/// Zero-exploration worst case for the myopic policy: the safe path pinned
/// at delta_ell/(1-alpha) versus an explore-then-exploit alternative,
/// against the lower bound 1/(1-rho).
RatioReport worstcase_myopic(double rho, const LimitOffsets& offsets = {});

/// Maximum-exploration worst case for the information-hiding policy across
/// several initial risky latencies; each report checks the closed-form
/// ratio (1-rho)*ell1/(rho^2*delta_ell) + rho to 5%.
std::vector<RatioReport> worstcase_hiding(double rho, const std::vector<double>& ell1_values,
                                          double delta_ell = 1.0,
                                          const LimitOffsets& offsets = {});

/// Over-exploration worst case for selective disclosure: stay-on-risky cost
/// versus the exploit-first lower bound, against the bound 1/(1-rho/2).
RatioReport worstcase_sid(double rho, const LimitOffsets& offsets = {});

/// Paired-seed Monte Carlo ratio of mean discounted costs, `policy` over
/// the receding-horizon socially optimal policy. Runs may be spread over
/// `threads`; aggregation order is fixed so results do not depend on it.
GammaEstimate inefficiency_ratio(const NetworkConfig& cfg, const PolicySpec& policy,
                                 const SystemState& initial, int runs, int horizon,
                                 std::uint64_t seed, SimulationMode mode = SimulationMode::Belief,
                                 int threads = 1);

/// Myopic and optimal exploration thresholds per belief grid point, for a
/// single-risky-path template state.
std::vector<ThresholdPoint> threshold_sweep(const NetworkConfig& cfg,
                                            const SystemState& template_state,
                                            const std::vector<double>& x_grid,
                                            const PlannerConfig& pcfg);

} // namespace crowdroute
