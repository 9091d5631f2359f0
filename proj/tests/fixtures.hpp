// Shared parameter sets used across the test suites.
#pragma once

#include "crowdroute/config.hpp"
#include "crowdroute/model.hpp"

namespace crowdroute::fixtures {

/// Small two-path study network: alpha = 0.6, alpha_H = 1.2, alpha_L = 0.2,
/// symmetric 0.5 chain, delta_ell = 2, p_H = 0.8, p_L = 0.3, ell0 = 10,
/// rho = 0.99. Its indifference belief is 0.4 and its stationary belief 0.5,
/// so the threshold crossing is pinned between them.
inline NetworkConfig two_path() {
    NetworkConfig cfg;
    cfg.n_risky = 1;
    cfg.alpha = 0.6;
    cfg.alpha_low = 0.2;
    cfg.alpha_high = 1.2;
    cfg.q_ll = 0.5;
    cfg.q_hh = 0.5;
    cfg.p_h = 0.8;
    cfg.p_l = 0.3;
    cfg.delta_ell = 2.0;
    cfg.rho = 0.99;
    return cfg;
}

inline SystemState two_path_state(double ell0 = 10.0, double ell1 = 10.0, double x1 = 0.1) {
    return SystemState::make(ell0, {ell1}, {x1});
}

/// Crowded-learning study network: alpha = 0.99, alpha_L = 0, alpha_H = 2,
/// slow 0.99 chain, delta_ell = 1, ell0(0) = 100, ell_i(0) = 105,
/// x_i(0) = 0.5.
inline NetworkConfig crowd_study(int n_risky) {
    NetworkConfig cfg;
    cfg.n_risky = n_risky;
    cfg.alpha = 0.99;
    cfg.alpha_low = 0.0;
    cfg.alpha_high = 2.0;
    cfg.q_ll = 0.99;
    cfg.q_hh = 0.99;
    cfg.p_h = 0.8;
    cfg.p_l = 0.2;
    cfg.delta_ell = 1.0;
    cfg.rho = 0.99;
    return cfg;
}

inline SystemState crowd_study_state(const NetworkConfig& cfg) {
    const auto n = static_cast<std::size_t>(cfg.n_risky);
    return SystemState::make(100.0, std::vector<double>(n, 105.0),
                             std::vector<double>(n, 0.5));
}

} // namespace crowdroute::fixtures
