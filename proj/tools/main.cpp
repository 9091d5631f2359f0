#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crowdroute/cli.hpp"
#include "crowdroute/errors.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "flat key = value parameter file")
        ->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "master seed; overrides the config's seed");
    cmd->add_option("--threads", args.threads, "worker threads for Monte Carlo runs")
        ->check(CLI::PositiveNumber);
}

int execute(const std::string& subcommand, const CommonArgs& args,
            const crowdroute::RunOptions& options) {
    const crowdroute::ParsedConfig config = crowdroute::parse_config_file(args.config_path);

    crowdroute::RunManifest manifest;
    manifest.config_path = args.config_path;
    manifest.subcommand = subcommand;
    manifest.out_dir = args.out_dir;
    manifest.timestamp = crowdroute::current_timestamp();
    if (args.seed)
        manifest.seed = *args.seed;
    else if (config.experiment.seed)
        manifest.seed = *config.experiment.seed;
    else
        throw crowdroute::config_error(
            "no seed: pass --seed or set 'seed' in the config (wall-clock seeding "
            "is not supported)");

    return crowdroute::dispatch(manifest, config, options);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"crowdroute: dynamic congestion game simulator and planner"};
    app.require_subcommand(1);

    CommonArgs common;
    crowdroute::RunOptions options;

    auto* simulate = app.add_subcommand("simulate", "run one policy trajectory");
    add_common(simulate, common);
    simulate->add_option("--policy", options.policy, "myopic|optimal|hiding|sid");
    simulate->add_option("--horizon", options.horizon, "number of arrivals to simulate");

    auto* sweep = app.add_subcommand("threshold-sweep",
                                     "myopic vs optimal exploration thresholds over beliefs");
    add_common(sweep, common);

    auto* poa_myopic = app.add_subcommand("poa-myopic", "myopic worst-case ratio vs 1/(1-rho)");
    add_common(poa_myopic, common);
    poa_myopic->add_option("--rho", options.rho, "discount factor for the construction");

    auto* poa_hiding =
        app.add_subcommand("poa-hiding", "information-hiding worst-case ratios over ell1");
    add_common(poa_hiding, common);
    poa_hiding->add_option("--rho", options.rho, "discount factor for the construction");
    poa_hiding->add_option("--ell1", options.ell1_values, "initial risky latencies to evaluate");

    auto* poa_sid = app.add_subcommand("poa-sid", "selective-disclosure ratio vs 1/(1-rho/2)");
    add_common(poa_sid, common);
    poa_sid->add_option("--rho", options.rho, "discount factor for the construction");

    auto* inefficiency =
        app.add_subcommand("inefficiency", "paired-seed average inefficiency ratio");
    add_common(inefficiency, common);
    inefficiency->add_option("--policy", options.policy, "myopic|optimal|hiding|sid");
    inefficiency->add_option("--horizon", options.horizon, "trajectory length per run");

    auto* rerun = app.add_subcommand("rerun", "re-execute a run from its emitted JSON summary");
    std::string manifest_path;
    std::string rerun_out = "out-rerun";
    rerun->add_option("manifest", manifest_path, "path to a <subcommand>.json summary")
        ->required();
    rerun->add_option("--out", rerun_out, "output directory for the re-run");

    CLI11_PARSE(app, argc, argv);

    try {
        if (rerun->parsed())
            return crowdroute::rerun_from_manifest(manifest_path, rerun_out);

        options.threads = common.threads;
        const std::string subcommand = app.get_subcommands().front()->get_name();
        return execute(subcommand, common, options);
    } catch (const crowdroute::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return crowdroute::kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return crowdroute::kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return crowdroute::kExitValidation;
    }
}
