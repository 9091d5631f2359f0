#include "crowdroute/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "crowdroute/errors.hpp"

namespace crowdroute {

namespace {

bool is_probability(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

void check_field(bool ok, const char* key, const char* what) {
    if (!ok) {
        std::ostringstream os;
        os << "invalid config: " << key << " " << what;
        throw config_error(os.str());
    }
}

} // namespace

void NetworkConfig::validate() const {
    check_field(n_risky >= 1, "n_risky", "must be >= 1");
    check_field(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0, "alpha",
                "must lie in (0,1)");
    check_field(std::isfinite(alpha_low) && alpha_low >= 0.0 && alpha_low < 1.0,
                "alpha_low", "must lie in [0,1)");
    check_field(std::isfinite(alpha_high) && alpha_high >= 1.0, "alpha_high",
                "must be >= 1");
    check_field(alpha_low < alpha, "alpha_low", "must be < alpha");
    check_field(alpha < alpha_high, "alpha", "must be < alpha_high");
    check_field(is_probability(q_ll), "q_ll", "must lie in [0,1]");
    check_field(is_probability(q_hh), "q_hh", "must lie in [0,1]");
    check_field(is_probability(p_h), "p_h", "must lie in [0,1]");
    check_field(is_probability(p_l), "p_l", "must lie in [0,1]");
    check_field(p_l < p_h, "p_l", "must be < p_h");
    check_field(std::isfinite(delta_ell) && delta_ell > 0.0, "delta_ell",
                "must be > 0");
    check_field(std::isfinite(rho) && rho >= 0.0 && rho < 1.0, "rho",
                "must lie in [0,1)");
}

void PlannerConfig::validate() const {
    check_field(horizon >= 1, "planner_horizon", "must be >= 1");
    check_field(std::isfinite(bisection_tol) && bisection_tol > 0.0, "bisection_tol",
                "must be > 0");
    check_field(std::isfinite(bracket_cap) && bracket_cap > 0.0, "bracket_cap",
                "must be > 0");
    check_field(node_cap >= 1, "node_cap", "must be >= 1");
}

double stationary_belief(const NetworkConfig& cfg) {
    const double denom = 2.0 - cfg.q_ll - cfg.q_hh;
    if (denom <= 0.0)
        throw std::domain_error(
            "stationary_belief: q_ll = q_hh = 1 leaves no unique stationary belief");
    return (1.0 - cfg.q_ll) / denom;
}

double indifference_belief(const NetworkConfig& cfg) {
    return (cfg.alpha - cfg.alpha_low) / (cfg.alpha_high - cfg.alpha_low);
}

SystemState SystemState::make(double ell0, std::vector<double> ell_risky,
                              std::vector<double> beliefs, std::int64_t t) {
    SystemState s;
    s.ell0 = ell0;
    s.ell_risky = std::move(ell_risky);
    s.beliefs = std::move(beliefs);
    s.t = t;
    return s;
}

void SystemState::validate(const NetworkConfig& cfg) const {
    const auto n = static_cast<std::size_t>(cfg.n_risky);
    if (ell_risky.size() != n || beliefs.size() != n)
        throw std::invalid_argument("SystemState: vector lengths must equal n_risky");
    if (!std::isfinite(ell0) || ell0 < 0.0)
        throw std::invalid_argument("SystemState: ell0 must be finite and >= 0");
    for (double v : ell_risky)
        if (!std::isfinite(v) || v < 0.0)
            throw std::invalid_argument("SystemState: risky latencies must be finite and >= 0");
    for (double x : beliefs)
        if (!is_probability(x))
            throw std::invalid_argument("SystemState: beliefs must lie in [0,1]");
    if (t < 0) throw std::invalid_argument("SystemState: t must be >= 0");
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t run_index) {
    std::uint64_t z = master_seed + 0x9e3779b97f4a7c15ULL * (run_index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double posterior_belief(double x, Outcome y, const NetworkConfig& cfg, bool* degenerate) {
    if (y == Outcome::None)
        throw std::invalid_argument("posterior_belief: outcome must be Hazard or NoHazard");
    if (degenerate) *degenerate = false;

    const double like_h = (y == Outcome::Hazard) ? cfg.p_h : 1.0 - cfg.p_h;
    const double like_l = (y == Outcome::Hazard) ? cfg.p_l : 1.0 - cfg.p_l;
    const double denom = x * like_h + (1.0 - x) * like_l;
    if (denom <= 0.0) {
        // Measure-zero parameter corner (e.g. p_l = 0 with x = 0 and y = 1):
        // keep the prior rather than dividing by zero.
        if (degenerate) *degenerate = true;
        return x;
    }
    double post = x * like_h / denom;
    if (post < 0.0) post = 0.0;
    if (post > 1.0) post = 1.0;
    return post;
}

double propagate_belief(double x_post, const NetworkConfig& cfg) {
    const double q_lh = 1.0 - cfg.q_ll;
    return x_post * cfg.q_hh + (1.0 - x_post) * q_lh;
}

double expected_coefficient(double x_post, const NetworkConfig& cfg) {
    return x_post * cfg.alpha_high + (1.0 - x_post) * cfg.alpha_low;
}

double step_safe_latency(double ell0, bool chosen, const NetworkConfig& cfg) {
    return cfg.alpha * ell0 + (chosen ? cfg.delta_ell : 0.0);
}

double step_risky_latency(double ell, double x_post, bool chosen, const NetworkConfig& cfg) {
    return expected_coefficient(x_post, cfg) * ell + (chosen ? cfg.delta_ell : 0.0);
}

double hazard_probability(double x, const NetworkConfig& cfg) {
    return (1.0 - x) * cfg.p_l + x * cfg.p_h;
}

void transition_into(const SystemState& state, int action, const Observation& obs,
                     const NetworkConfig& cfg, SystemState& out) {
    const int n = cfg.n_risky;
    if (action < 0 || action > n)
        throw std::invalid_argument("transition: action out of range");
    if (!obs.empty() && obs.path != action)
        throw std::invalid_argument("transition: observation on a path the user did not take");

    out.ell_risky.resize(static_cast<std::size_t>(n));
    out.beliefs.resize(static_cast<std::size_t>(n));

    out.ell0 = step_safe_latency(state.ell0, action == 0, cfg);
    if (action == 0 && out.ell0 > kLatencyDivergenceGuard)
        throw divergence_error("transition: travelled safe-path latency exceeded 1e15");

    for (int i = 1; i <= n; ++i) {
        const std::size_t k = static_cast<std::size_t>(i - 1);
        const Outcome y = obs.outcome_at(i);
        const double x_post = (y == Outcome::None)
                                  ? state.beliefs[k]
                                  : posterior_belief(state.beliefs[k], y, cfg);
        out.ell_risky[k] = step_risky_latency(state.ell_risky[k], x_post, action == i, cfg);
        if (action == i && out.ell_risky[k] > kLatencyDivergenceGuard)
            throw divergence_error("transition: travelled risky-path latency exceeded 1e15");
        if (out.ell_risky[k] > kLatencyOverflowAbort)
            throw divergence_error("transition: risky-path latency bookkeeping overflowed");
        out.beliefs[k] = propagate_belief(x_post, cfg);
    }
    out.t = state.t + 1;
}

SystemState transition(const SystemState& state, int action, const Observation& obs,
                       const NetworkConfig& cfg) {
    SystemState out;
    transition_into(state, action, obs, cfg, out);
    return out;
}

Observation sample_observation(const SystemState& state, const HiddenTruth* truth,
                               int action, SimulationMode mode, const NetworkConfig& cfg,
                               std::mt19937_64& rng) {
    const int n = static_cast<int>(state.beliefs.size());
    if (action < 0 || action > n)
        throw std::invalid_argument("sample_observation: action out of range");
    if (action == 0) return Observation::none();

    const std::size_t k = static_cast<std::size_t>(action - 1);
    double p_hazard;
    if (mode == SimulationMode::GroundTruth) {
        if (truth == nullptr || truth->high.size() != state.beliefs.size())
            throw std::invalid_argument("sample_observation: ground-truth mode needs a truth");
        p_hazard = truth->high[k] ? cfg.p_h : cfg.p_l;
    } else {
        p_hazard = hazard_probability(state.beliefs[k], cfg);
    }
    const bool hazard = uniform01(rng) < p_hazard;
    return Observation::on_path(action, hazard ? Outcome::Hazard : Outcome::NoHazard);
}

HiddenTruth step_truth(const HiddenTruth& truth, const NetworkConfig& cfg,
                       std::mt19937_64& rng) {
    HiddenTruth next;
    next.high.resize(truth.high.size());
    for (std::size_t k = 0; k < truth.high.size(); ++k) {
        const double u = uniform01(rng);
        next.high[k] = truth.high[k] ? (u < cfg.q_hh ? 1 : 0)
                                     : (u < cfg.q_ll ? 0 : 1);
    }
    return next;
}

HiddenTruth sample_truth(const std::vector<double>& beliefs, std::mt19937_64& rng) {
    HiddenTruth truth;
    truth.high.resize(beliefs.size());
    for (std::size_t k = 0; k < beliefs.size(); ++k)
        truth.high[k] = uniform01(rng) < beliefs[k] ? 1 : 0;
    return truth;
}

} // namespace crowdroute
