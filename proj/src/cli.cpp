#include "crowdroute/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "crowdroute/errors.hpp"
#include "crowdroute/experiments.hpp"
#include "crowdroute/planner.hpp"

namespace crowdroute {

namespace {

using nlohmann::json;

PolicyKind parse_policy(const std::string& name) {
    if (name == "myopic") return PolicyKind::Myopic;
    if (name == "optimal") return PolicyKind::SocialOptimal;
    if (name == "hiding") return PolicyKind::Hiding;
    if (name == "sid") return PolicyKind::Sid;
    throw config_error("unknown policy '" + name + "'; expected myopic|optimal|hiding|sid");
}

const char* policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::Myopic: return "myopic";
        case PolicyKind::SocialOptimal: return "optimal";
        case PolicyKind::Hiding: return "hiding";
        case PolicyKind::Sid: return "sid";
    }
    return "unknown";
}

const char* outcome_name(const Observation& obs) {
    switch (obs.outcome) {
        case Outcome::Hazard: return "hazard";
        case Outcome::NoHazard: return "no_hazard";
        case Outcome::None: return "none";
    }
    return "none";
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + path.string());
    return out;
}

json report_to_json(const RatioReport& report) {
    json params = json::object();
    for (const auto& [key, value] : report.parameters) params[key] = value;
    const char* kind = report.bound_kind == BoundKind::LowerBound    ? "lower"
                       : report.bound_kind == BoundKind::UpperBound ? "upper"
                                                                    : "match_within";
    return json{{"numerator", report.numerator},
                {"denominator", report.denominator},
                {"ratio", report.ratio},
                {"bound", report.bound},
                {"bound_name", report.bound_name},
                {"bound_kind", kind},
                {"slack", report.slack},
                {"satisfied", report.satisfied},
                {"parameters", params}};
}

json manifest_to_json(const RunManifest& manifest) {
    return json{{"config_path", manifest.config_path},
                {"subcommand", manifest.subcommand},
                {"seed", manifest.seed},
                {"out_dir", manifest.out_dir},
                {"tool_version", manifest.tool_version},
                {"timestamp", manifest.timestamp}};
}

json options_to_json(const RunOptions& options) {
    json out = json::object();
    if (options.rho) out["rho"] = *options.rho;
    if (options.policy) out["policy"] = *options.policy;
    if (options.horizon) out["horizon"] = *options.horizon;
    if (!options.ell1_values.empty()) out["ell1_values"] = options.ell1_values;
    out["threads"] = options.threads;
    return out;
}

void write_summary(const RunManifest& manifest, const ParsedConfig& config,
                   const RunOptions& options, const json& results) {
    json doc;
    doc["manifest"] = manifest_to_json(manifest);
    doc["config"] = config.resolved();
    doc["options"] = options_to_json(options);
    doc["results"] = results;
    auto out = open_output(std::filesystem::path(manifest.out_dir) /
                           (manifest.subcommand + ".json"));
    out << doc.dump(2) << '\n';
}

int run_simulate(const RunManifest& manifest, const ParsedConfig& config,
                 const RunOptions& options) {
    PolicySpec policy;
    policy.kind = options.policy ? parse_policy(*options.policy) : PolicyKind::Myopic;
    policy.planner = config.planner;
    const int horizon = options.horizon.value_or(config.experiment.horizon);
    if (horizon < 1) throw config_error("invalid config: horizon must be >= 1");

    const SystemState initial = config.experiment.initial_state(config.network);
    const TrajectoryRecord record = run_trajectory(config.network, policy, initial, horizon,
                                                   manifest.seed, config.experiment.mode);

    auto csv = open_output(std::filesystem::path(manifest.out_dir) / "simulate.csv");
    csv << "t,action,disclosed,observation,latency,ell0";
    for (int i = 1; i <= config.network.n_risky; ++i) csv << ",ell_" << i;
    for (int i = 1; i <= config.network.n_risky; ++i) csv << ",x_" << i;
    csv << "\n";
    for (const TrajectoryStep& step : record.steps) {
        csv << step.t << ',' << step.action << ',' << (step.disclosed ? 1 : 0) << ','
            << outcome_name(step.obs) << ',' << format_double(step.latency) << ','
            << format_double(step.ell0);
        for (double v : step.ell_risky) csv << ',' << format_double(v);
        for (double x : step.beliefs) csv << ',' << format_double(x);
        csv << "\n";
    }

    write_summary(manifest, config, options,
                  json{{"policy", policy_name(policy.kind)},
                       {"mode", config.experiment.mode == SimulationMode::Belief
                                    ? "belief"
                                    : "ground-truth"},
                       {"horizon", horizon},
                       {"total_discounted_cost", record.total_discounted_cost}});
    return kExitOk;
}

int run_threshold_sweep(const RunManifest& manifest, const ParsedConfig& config,
                        const RunOptions& options) {
    if (config.network.n_risky != 1)
        throw config_error("threshold-sweep requires n_risky = 1");
    const SystemState tmpl = config.experiment.initial_state(config.network);
    std::vector<double> grid;
    const int points = config.experiment.grid_points;
    grid.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i)
        grid.push_back(static_cast<double>(i) / (points - 1));

    const auto table = threshold_sweep(config.network, tmpl, grid, config.planner);
    const CrossingResult crossing =
        belief_crossing(config.network, tmpl, points, config.planner);

    auto csv = open_output(std::filesystem::path(manifest.out_dir) / "threshold-sweep.csv");
    csv << "x,ell_m,ell_star\n";
    for (const ThresholdPoint& point : table)
        csv << format_double(point.x) << ',' << format_double(point.ell_myopic) << ','
            << format_double(point.ell_optimal) << "\n";

    write_summary(manifest, config, options,
                  json{{"grid_points", points},
                       {"crossing",
                        json{{"found", crossing.found},
                             {"x_low", crossing.x_low},
                             {"x_high", crossing.x_high},
                             {"x_cross", crossing.x_cross}}}});
    return kExitOk;
}

void write_report_csv(std::ofstream& csv, const RatioReport& report,
                      const std::string& lead_name, double lead_value) {
    csv << lead_name << ",numerator,denominator,ratio,bound,satisfied\n";
    csv << format_double(lead_value) << ',' << format_double(report.numerator) << ','
        << format_double(report.denominator) << ',' << format_double(report.ratio) << ','
        << format_double(report.bound) << ',' << (report.satisfied ? 1 : 0) << "\n";
}

int run_poa_myopic(const RunManifest& manifest, const ParsedConfig& config,
                   const RunOptions& options) {
    const double rho = options.rho.value_or(config.network.rho);
    const RatioReport report = worstcase_myopic(rho, config.experiment.offsets);
    auto csv = open_output(std::filesystem::path(manifest.out_dir) / "poa-myopic.csv");
    write_report_csv(csv, report, "rho", rho);
    write_summary(manifest, config, options, json{{"report", report_to_json(report)}});
    return report.satisfied ? kExitOk : kExitBoundViolation;
}

int run_poa_hiding(const RunManifest& manifest, const ParsedConfig& config,
                   const RunOptions& options) {
    const double rho = options.rho.value_or(config.network.rho);
    std::vector<double> ell1_values = options.ell1_values;
    if (ell1_values.empty()) ell1_values = {1e2, 1e3, 1e4, 1e5};
    const auto reports = worstcase_hiding(rho, ell1_values, config.network.delta_ell,
                                          config.experiment.offsets);

    auto csv = open_output(std::filesystem::path(manifest.out_dir) / "poa-hiding.csv");
    csv << "ell1,numerator,denominator,ratio,formula,satisfied\n";
    bool all_ok = true;
    json arr = json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const RatioReport& report = reports[i];
        csv << format_double(ell1_values[i]) << ',' << format_double(report.numerator) << ','
            << format_double(report.denominator) << ',' << format_double(report.ratio) << ','
            << format_double(report.bound) << ',' << (report.satisfied ? 1 : 0) << "\n";
        all_ok = all_ok && report.satisfied;
        arr.push_back(report_to_json(report));
    }
    write_summary(manifest, config, options, json{{"reports", arr}});
    return all_ok ? kExitOk : kExitBoundViolation;
}

int run_poa_sid(const RunManifest& manifest, const ParsedConfig& config,
                const RunOptions& options) {
    const double rho = options.rho.value_or(config.network.rho);
    const RatioReport report = worstcase_sid(rho, config.experiment.offsets);
    auto csv = open_output(std::filesystem::path(manifest.out_dir) / "poa-sid.csv");
    write_report_csv(csv, report, "rho", rho);
    write_summary(manifest, config, options, json{{"report", report_to_json(report)}});
    return report.satisfied ? kExitOk : kExitBoundViolation;
}

int run_inefficiency(const RunManifest& manifest, const ParsedConfig& config,
                     const RunOptions& options) {
    PolicySpec policy;
    policy.kind = options.policy ? parse_policy(*options.policy) : PolicyKind::Myopic;
    policy.planner = config.planner;
    const int horizon = options.horizon.value_or(config.experiment.horizon);
    if (horizon < 1) throw config_error("invalid config: horizon must be >= 1");

    const SystemState initial = config.experiment.initial_state(config.network);
    const GammaEstimate estimate =
        inefficiency_ratio(config.network, policy, initial, config.experiment.runs, horizon,
                           manifest.seed, config.experiment.mode, options.threads);

    auto csv = open_output(std::filesystem::path(manifest.out_dir) / "inefficiency.csv");
    csv << "run,seed,policy_cost,optimal_cost,ratio\n";
    for (int r = 0; r < estimate.runs; ++r) {
        const auto k = static_cast<std::size_t>(r);
        csv << r << ',' << derive_seed(manifest.seed, static_cast<std::uint64_t>(r)) << ','
            << format_double(estimate.policy_costs[k]) << ','
            << format_double(estimate.optimal_costs[k]) << ','
            << format_double(estimate.policy_costs[k] / estimate.optimal_costs[k]) << "\n";
    }

    write_summary(manifest, config, options,
                  json{{"policy", policy_name(policy.kind)},
                       {"runs", estimate.runs},
                       {"horizon", horizon},
                       {"gamma", estimate.gamma},
                       {"std_error", estimate.std_error}});
    return kExitOk;
}

} // namespace

std::string current_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int dispatch(const RunManifest& manifest, const ParsedConfig& config,
             const RunOptions& options) {
    std::filesystem::create_directories(manifest.out_dir);
    const std::string& sub = manifest.subcommand;
    if (sub == "simulate") return run_simulate(manifest, config, options);
    if (sub == "threshold-sweep") return run_threshold_sweep(manifest, config, options);
    if (sub == "poa-myopic") return run_poa_myopic(manifest, config, options);
    if (sub == "poa-hiding") return run_poa_hiding(manifest, config, options);
    if (sub == "poa-sid") return run_poa_sid(manifest, config, options);
    if (sub == "inefficiency") return run_inefficiency(manifest, config, options);
    throw config_error("unknown subcommand '" + sub + "'");
}

int rerun_from_manifest(const std::string& manifest_json_path, const std::string& out_dir) {
    std::ifstream in(manifest_json_path);
    if (!in) throw config_error("cannot open manifest: " + manifest_json_path);
    json doc = json::parse(in);

    // Rebuild the config from the embedded resolved values so the rerun does
    // not depend on the original config file still existing.
    std::ostringstream text;
    for (const auto& [key, value] : doc.at("config").items())
        text << key << " = " << value.get<std::string>() << "\n";
    const ParsedConfig config = parse_config(text.str());

    RunManifest manifest;
    manifest.config_path = doc.at("manifest").at("config_path").get<std::string>();
    manifest.subcommand = doc.at("manifest").at("subcommand").get<std::string>();
    manifest.seed = doc.at("manifest").at("seed").get<std::uint64_t>();
    manifest.out_dir = out_dir;
    manifest.timestamp = current_timestamp();

    RunOptions options;
    const json& opts = doc.at("options");
    if (opts.contains("rho")) options.rho = opts.at("rho").get<double>();
    if (opts.contains("policy")) options.policy = opts.at("policy").get<std::string>();
    if (opts.contains("horizon")) options.horizon = opts.at("horizon").get<int>();
    if (opts.contains("ell1_values"))
        options.ell1_values = opts.at("ell1_values").get<std::vector<double>>();
    if (opts.contains("threads")) options.threads = opts.at("threads").get<int>();

    return dispatch(manifest, config, options);
}

} // namespace crowdroute
