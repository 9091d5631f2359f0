#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "crowdroute/config.hpp"
#include "crowdroute/experiments.hpp"
#include "crowdroute/model.hpp"

namespace crowdroute {

/// Experiment-level knobs that ride alongside the network parameters in the
/// same flat config document.
struct ExperimentParams {
    double ell0_init = 0.0;
    double ell_risky_init = 0.0;
    std::optional<double> x_init; // defaults to the stationary belief
    int horizon = 300;
    int runs = 50;
    std::optional<std::uint64_t> seed;
    int grid_points = 21;
    SimulationMode mode = SimulationMode::Belief;
    LimitOffsets offsets;

    double initial_belief(const NetworkConfig& cfg) const {
        return x_init ? *x_init : stationary_belief(cfg);
    }

    SystemState initial_state(const NetworkConfig& cfg) const;
};

struct ParsedConfig {
    NetworkConfig network;
    PlannerConfig planner;
    ExperimentParams experiment;

    /// Every key with its resolved value, in schema order, for provenance
    /// embedding; numeric strings round-trip doubles exactly.
    std::map<std::string, std::string> resolved() const;
};

/// Parses the flat key = value document. Unknown keys, missing required
/// keys, malformed numbers, out-of-range values and ordering violations all
/// raise config_error naming the offending key. '#' starts a comment.
ParsedConfig parse_config(const std::string& text);

/// Reads the file and delegates to parse_config.
ParsedConfig parse_config_file(const std::string& path);

/// 17-significant-digit rendering used for every double that reaches a CSV
/// or provenance record.
std::string format_double(double value);

} // namespace crowdroute
