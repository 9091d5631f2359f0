#include "crowdroute/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "crowdroute/errors.hpp"
#include "crowdroute/planner.hpp"

namespace crowdroute {

int truncation_horizon(double rho, double tail) {
    if (rho < 0.0 || rho >= 1.0)
        throw std::invalid_argument("truncation_horizon: rho must lie in [0,1)");
    if (tail <= 0.0 || tail >= 1.0)
        throw std::invalid_argument("truncation_horizon: tail must lie in (0,1)");
    if (rho == 0.0) return 1;
    int t = 1;
    double power = rho;
    while (power >= tail) {
        power *= rho;
        ++t;
        if (t > 10'000'000)
            throw std::invalid_argument("truncation_horizon: rho too close to 1");
    }
    return t;
}

double discounted_sum(double rho, int from, int to) {
    double sum = 0.0;
    double power = 1.0;
    for (int t = 0; t < to; ++t) {
        if (t >= from) sum += power;
        power *= rho;
    }
    return sum;
}

namespace {

int route_for(const PolicySpec& policy, const SystemState& state, const NetworkConfig& cfg,
              const PlannerConfig& pcfg, std::mt19937_64& rng, bool* disclosed) {
    *disclosed = false;
    switch (policy.kind) {
        case PolicyKind::Myopic:
            return myopic_route(state);
        case PolicyKind::Hiding:
            return hiding_route(cfg, rng);
        case PolicyKind::SocialOptimal:
            return optimal_plan(state, cfg, pcfg).action;
        case PolicyKind::Sid: {
            const RoutingOutcome out = sid_route(state, cfg, pcfg);
            *disclosed = out.disclosed;
            return out.action;
        }
    }
    throw std::logic_error("route_for: unknown policy kind");
}

} // namespace

TrajectoryRecord run_trajectory(const NetworkConfig& cfg, const PolicySpec& policy,
                                const SystemState& initial, int horizon,
                                std::uint64_t seed, SimulationMode mode) {
    cfg.validate();
    initial.validate(cfg);
    if (horizon < 1)
        throw std::invalid_argument("run_trajectory: horizon must be >= 1");
    if (policy.needs_planner()) policy.planner.validate();

    TrajectoryRecord record;
    record.seed = seed;
    record.policy = policy;
    record.mode = mode;
    record.steps.reserve(static_cast<std::size_t>(horizon));

    std::mt19937_64 rng(seed);
    SystemState state = initial;
    SystemState next;
    HiddenTruth truth;
    if (mode == SimulationMode::GroundTruth) truth = sample_truth(initial.beliefs, rng);

    double discount = 1.0;
    for (int step = 0; step < horizon; ++step) {
        // Near the end of the run the lookahead shrinks to the steps that
        // remain, so a run as long as the planner horizon is played exactly
        // optimally for the truncated game.
        PlannerConfig pcfg = policy.planner;
        if (policy.needs_planner())
            pcfg.horizon = std::min(pcfg.horizon, horizon - step);

        bool disclosed = false;
        const int action = route_for(policy, state, cfg, pcfg, rng, &disclosed);
        const double latency =
            action == 0 ? state.ell0 : state.ell_risky[static_cast<std::size_t>(action - 1)];

        const Observation obs = sample_observation(
            state, mode == SimulationMode::GroundTruth ? &truth : nullptr, action, mode, cfg, rng);

        TrajectoryStep entry;
        entry.t = state.t;
        entry.ell0 = state.ell0;
        entry.ell_risky = state.ell_risky;
        entry.beliefs = state.beliefs;
        entry.action = action;
        entry.disclosed = disclosed;
        entry.obs = obs;
        entry.latency = latency;
        record.steps.push_back(std::move(entry));

        record.total_discounted_cost += discount * latency;
        discount *= cfg.rho;

        transition_into(state, action, obs, cfg, next);
        std::swap(state, next);
        if (mode == SimulationMode::GroundTruth) truth = step_truth(truth, cfg, rng);
    }
    return record;
}

double discounted_cost(const TrajectoryRecord& record, double rho) {
    double sum = 0.0;
    double power = 1.0;
    for (const TrajectoryStep& step : record.steps) {
        sum += power * step.latency;
        power *= rho;
    }
    return sum;
}

RatioReport worstcase_myopic(double rho, const LimitOffsets& offsets) {
    if (rho < 0.0 || rho >= 1.0)
        throw std::invalid_argument("worstcase_myopic: rho must lie in [0,1)");

    const double eps = offsets.offset;
    const double delta_ell = 1.0;
    const double ell0 = delta_ell / eps; // delta_ell / ell0 = eps, ell0 = delta_ell/(1-alpha)
    const int t_max = truncation_horizon(rho);

    // Myopic users face a tie every slot and stay on the safe path, whose
    // latency is pinned at delta_ell/(1-alpha).
    const double myopic_cost = ell0 * discounted_sum(rho, 0, t_max);
    // The alternative explores once, learns the low state, and rides the
    // risky path at delta_ell per slot afterwards.
    const double explore_cost = ell0 + delta_ell * discounted_sum(rho, 1, t_max);

    RatioReport report;
    report.numerator = myopic_cost;
    report.denominator = explore_cost;
    report.ratio = myopic_cost / explore_cost;
    report.bound = 1.0 / (1.0 - rho);
    report.bound_name = "myopic_poa_lower_bound";
    report.bound_kind = BoundKind::LowerBound;
    report.slack = 0.9;
    report.satisfied = report.ratio >= report.slack * report.bound;

    const double x_bar = eps / (1.0 + eps); // q_hh = 0 keeps the high state rare
    report.parameters = {
        {"rho", rho},
        {"epsilon", eps},
        {"delta_ell", delta_ell},
        {"ell0_init", ell0},
        {"ell_risky_init", ell0},
        {"alpha", 1.0 - eps},
        {"alpha_low", 0.0},
        {"alpha_high", (1.0 + eps) / eps},
        {"q_ll", 1.0 - eps},
        {"q_hh", 0.0},
        {"p_h", 1.0 - offsets.prob_limit},
        {"p_l", offsets.prob_limit},
        {"x_init", x_bar},
        {"truncation", static_cast<double>(t_max)},
    };
    return report;
}

std::vector<RatioReport> worstcase_hiding(double rho, const std::vector<double>& ell1_values,
                                          double delta_ell, const LimitOffsets& offsets) {
    if (rho <= 0.0 || rho >= 1.0)
        throw std::invalid_argument(
            "worstcase_hiding: rho must lie in (0,1); the optimal cost degenerates at rho = 0");
    if (delta_ell <= 0.0)
        throw std::invalid_argument("worstcase_hiding: delta_ell must be > 0");

    const int t_max = truncation_horizon(rho);
    std::vector<RatioReport> reports;
    reports.reserve(ell1_values.size());
    for (double ell1 : ell1_values) {
        if (ell1 <= 0.0)
            throw std::invalid_argument("worstcase_hiding: ell1 values must be > 0");
        // Uninformed users pile onto the risky path from t = 0; its expected
        // latency collapses to delta_ell once the low state is certain.
        const double hiding_cost = ell1 + delta_ell * discounted_sum(rho, 1, t_max);
        // Sending the first user to the empty safe path zeroes the risky
        // latency for the second user, after which each slot costs delta_ell.
        const double optimal_cost = delta_ell * discounted_sum(rho, 2, t_max);

        RatioReport report;
        report.numerator = hiding_cost;
        report.denominator = optimal_cost;
        report.ratio = hiding_cost / optimal_cost;
        report.bound = (1.0 - rho) * ell1 / (rho * rho * delta_ell) + rho;
        report.bound_name = "hiding_poa_closed_form";
        report.bound_kind = BoundKind::MatchWithin;
        report.slack = 0.05;
        report.satisfied =
            std::abs(report.ratio - report.bound) <= report.slack * report.bound;
        report.parameters = {
            {"rho", rho},
            {"delta_ell", delta_ell},
            {"ell0_init", 0.0},
            {"ell_risky_init", ell1},
            {"alpha", 1.0 - offsets.prob_limit},
            {"alpha_low", 0.0},
            {"alpha_high", 2.0},
            {"q_ll", 1.0},
            {"q_hh", 0.5},
            {"x_init", 0.0},
            {"truncation", static_cast<double>(t_max)},
        };
        reports.push_back(std::move(report));
    }
    return reports;
}

RatioReport worstcase_sid(double rho, const LimitOffsets& offsets) {
    if (rho < 0.0 || rho >= 1.0)
        throw std::invalid_argument("worstcase_sid: rho must lie in [0,1)");

    const double delta_ell = 1.0;
    const double alpha_bar = 0.5; // stationary expected coefficient at the worst case
    const double ell1 = delta_ell / (1.0 - alpha_bar);
    // The safe path sits just above the risky one so the disclosed user
    // deviates to the risky path every slot.
    const double ell0 = ell1 + offsets.offset;
    const int t_max = truncation_horizon(rho);

    const double sid_cost = ell1 * discounted_sum(rho, 0, t_max);
    // Exploit-first lower bound: one slot on the safe path, then at least
    // ell1/2 per slot on the half-coefficient risky path.
    const double optimal_lb = ell0 + 0.5 * ell1 * discounted_sum(rho, 1, t_max);

    RatioReport report;
    report.numerator = sid_cost;
    report.denominator = optimal_lb;
    report.ratio = sid_cost / optimal_lb;
    report.bound = 1.0 / (1.0 - 0.5 * rho);
    report.bound_name = "sid_poa_upper_bound";
    report.bound_kind = BoundKind::UpperBound;
    report.slack = 1.0;
    report.satisfied = report.ratio <= report.bound;
    report.parameters = {
        {"rho", rho},
        {"delta_ell", delta_ell},
        {"ell0_init", ell0},
        {"ell_risky_init", ell1},
        {"alpha", 1.0 - offsets.prob_limit},
        {"alpha_low", 0.0},
        {"alpha_high", 1.0},
        {"q_ll", 0.5},
        {"q_hh", 0.5},
        {"x_init", 0.5},
        {"truncation", static_cast<double>(t_max)},
    };
    return report;
}

GammaEstimate inefficiency_ratio(const NetworkConfig& cfg, const PolicySpec& policy,
                                 const SystemState& initial, int runs, int horizon,
                                 std::uint64_t seed, SimulationMode mode, int threads) {
    if (runs < 1) throw std::invalid_argument("inefficiency_ratio: runs must be >= 1");
    if (threads < 1) threads = 1;

    PolicySpec optimal;
    optimal.kind = PolicyKind::SocialOptimal;
    optimal.planner = policy.planner;

    GammaEstimate estimate;
    estimate.runs = runs;
    estimate.policy_costs.resize(static_cast<std::size_t>(runs));
    estimate.optimal_costs.resize(static_cast<std::size_t>(runs));

    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker = [&](int begin, int end) {
        try {
            for (int r = begin; r < end; ++r) {
                const std::uint64_t run_seed = derive_seed(seed, static_cast<std::uint64_t>(r));
                const auto policy_run = run_trajectory(cfg, policy, initial, horizon, run_seed, mode);
                const auto optimal_run =
                    run_trajectory(cfg, optimal, initial, horizon, run_seed, mode);
                estimate.policy_costs[static_cast<std::size_t>(r)] =
                    policy_run.total_discounted_cost;
                estimate.optimal_costs[static_cast<std::size_t>(r)] =
                    optimal_run.total_discounted_cost;
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    if (threads == 1) {
        worker(0, runs);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (runs + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int begin = t * chunk;
            const int end = std::min(runs, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    double policy_mean = 0.0;
    double optimal_mean = 0.0;
    for (int r = 0; r < runs; ++r) {
        policy_mean += estimate.policy_costs[static_cast<std::size_t>(r)];
        optimal_mean += estimate.optimal_costs[static_cast<std::size_t>(r)];
    }
    policy_mean /= runs;
    optimal_mean /= runs;
    if (optimal_mean <= 0.0)
        throw std::domain_error("inefficiency_ratio: optimal cost is zero");

    estimate.gamma = policy_mean / optimal_mean;

    // Delta-method standard error for a ratio of paired means.
    if (runs > 1) {
        double var_p = 0.0, var_o = 0.0, cov = 0.0;
        for (int r = 0; r < runs; ++r) {
            const double dp = estimate.policy_costs[static_cast<std::size_t>(r)] - policy_mean;
            const double dq = estimate.optimal_costs[static_cast<std::size_t>(r)] - optimal_mean;
            var_p += dp * dp;
            var_o += dq * dq;
            cov += dp * dq;
        }
        var_p /= runs - 1;
        var_o /= runs - 1;
        cov /= runs - 1;
        const double g = estimate.gamma;
        const double var_ratio =
            (var_p - 2.0 * g * cov + g * g * var_o) / (optimal_mean * optimal_mean * runs);
        estimate.std_error = var_ratio > 0.0 ? std::sqrt(var_ratio) : 0.0;
    }
    return estimate;
}

std::vector<ThresholdPoint> threshold_sweep(const NetworkConfig& cfg,
                                            const SystemState& template_state,
                                            const std::vector<double>& x_grid,
                                            const PlannerConfig& pcfg) {
    if (cfg.n_risky != 1)
        throw std::invalid_argument("threshold_sweep: needs a single-risky-path template");
    std::vector<ThresholdPoint> table;
    table.reserve(x_grid.size());
    SystemState probe = template_state;
    for (double x : x_grid) {
        probe.beliefs[0] = x;
        ThresholdPoint point;
        point.x = x;
        point.ell_myopic = myopic_threshold(probe);
        point.ell_optimal = exploration_threshold(probe, 1, cfg, pcfg);
        table.push_back(point);
    }
    return table;
}

} // namespace crowdroute
