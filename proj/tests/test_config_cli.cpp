#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "crowdroute/cli.hpp"
#include "crowdroute/config_io.hpp"
#include "crowdroute/errors.hpp"

using namespace crowdroute;

namespace {

const char* kTwoPathConfig = R"(# two-path threshold study
n_risky = 1
alpha = 0.6
alpha_low = 0.2
alpha_high = 1.2
q_ll = 0.5
q_hh = 0.5
p_h = 0.8
p_l = 0.3
delta_ell = 2
rho = 0.99
ell0_init = 10
ell_risky_init = 10
x_init = 0.1
planner_horizon = 4
grid_points = 21
seed = 11
)";

const char* kCrowdConfig = R"(n_risky = 2
alpha = 0.99
alpha_low = 0
alpha_high = 2
q_ll = 0.99
q_hh = 0.99
p_h = 0.8
p_l = 0.2
delta_ell = 1
rho = 0.99
ell0_init = 100
ell_risky_init = 105
x_init = 0.5
planner_horizon = 4
horizon = 40
runs = 4
seed = 3
)";

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::filesystem::path fresh_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "crowdroute_tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("two-path parameter file parses and reports its stationary belief") {
    const ParsedConfig config = parse_config(kTwoPathConfig);
    CHECK(config.network.alpha == 0.6);
    CHECK(config.network.delta_ell == 2.0);
    CHECK(stationary_belief(config.network) == doctest::Approx(0.5));
    CHECK(config.experiment.ell0_init == 10.0);
    CHECK(config.experiment.initial_belief(config.network) == 0.1);
    CHECK(config.planner.horizon == 4);
    REQUIRE(config.experiment.seed.has_value());
    CHECK(*config.experiment.seed == 11);
}

TEST_CASE("crowd-study file with alpha_high = 2 is accepted") {
    const ParsedConfig config = parse_config(kCrowdConfig);
    CHECK(config.network.n_risky == 2);
    CHECK(config.network.alpha_high == 2.0);
    const SystemState initial = config.experiment.initial_state(config.network);
    CHECK(initial.ell_risky == std::vector<double>{105.0, 105.0});
    CHECK(initial.beliefs == std::vector<double>{0.5, 0.5});
}

TEST_CASE("config rejections name the offending key") {
    SUBCASE("ordering violation") {
        std::string text = kTwoPathConfig;
        text += "\n";
        const auto broken = std::string(kTwoPathConfig) + "";
        std::string swapped(kTwoPathConfig);
        swapped.replace(swapped.find("alpha_low = 0.2"), 15, "alpha_low = 0.7");
        CHECK_THROWS_WITH_AS(parse_config(swapped),
                             doctest::Contains("alpha_low"), config_error);
    }
    SUBCASE("missing key") {
        std::string text(kTwoPathConfig);
        text.erase(text.find("delta_ell = 2"), 13);
        CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("delta_ell"), config_error);
    }
    SUBCASE("unknown key") {
        const std::string text = std::string(kTwoPathConfig) + "warp_speed = 9\n";
        CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("warp_speed"), config_error);
    }
    SUBCASE("out-of-range value") {
        std::string text(kTwoPathConfig);
        text.replace(text.find("rho = 0.99"), 10, "rho = 1.5");
        CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("rho"), config_error);
    }
    SUBCASE("malformed number") {
        std::string text(kTwoPathConfig);
        text.replace(text.find("p_h = 0.8"), 9, "p_h = fast");
        CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("p_h"), config_error);
    }
}

TEST_CASE("resolved map round-trips through parse_config") {
    const ParsedConfig config = parse_config(kTwoPathConfig);
    std::ostringstream text;
    for (const auto& [key, value] : config.resolved()) text << key << " = " << value << "\n";
    const ParsedConfig reparsed = parse_config(text.str());
    CHECK(reparsed.network.alpha == config.network.alpha);
    CHECK(reparsed.network.rho == config.network.rho);
    CHECK(reparsed.planner.horizon == config.planner.horizon);
    CHECK(reparsed.experiment.grid_points == config.experiment.grid_points);
}

TEST_CASE("threshold-sweep dispatch writes the documented CSV columns") {
    const auto dir = fresh_dir("sweep");
    ParsedConfig config = parse_config(kTwoPathConfig);
    config.experiment.grid_points = 5; // keep the unit test quick
    RunManifest manifest;
    manifest.config_path = "<inline>";
    manifest.subcommand = "threshold-sweep";
    manifest.seed = 11;
    manifest.out_dir = dir.string();
    manifest.timestamp = current_timestamp();
    const int status = dispatch(manifest, config, RunOptions{});
    CHECK(status == kExitOk);

    const std::string csv = slurp(dir / "threshold-sweep.csv");
    CHECK(csv.rfind("x,ell_m,ell_star\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6); // header + 5 rows

    const auto doc = nlohmann::json::parse(slurp(dir / "threshold-sweep.json"));
    CHECK(doc.at("manifest").at("subcommand") == "threshold-sweep");
    CHECK(doc.at("config").at("alpha") == "0.59999999999999998");
    CHECK(doc.at("results").contains("crossing"));
}

TEST_CASE("poa-sid dispatch stays under its bound and exits zero") {
    const auto dir = fresh_dir("poa_sid");
    const ParsedConfig config = parse_config(kTwoPathConfig);
    RunManifest manifest;
    manifest.subcommand = "poa-sid";
    manifest.seed = 11;
    manifest.out_dir = dir.string();
    RunOptions options;
    options.rho = 0.9;
    CHECK(dispatch(manifest, config, options) == kExitOk);
    const auto doc = nlohmann::json::parse(slurp(dir / "poa-sid.json"));
    const double ratio = doc.at("results").at("report").at("ratio").get<double>();
    CHECK(ratio <= 1.8182);
}

TEST_CASE("a poa report that misses its bound exits with the violation code") {
    // at small ell1 the truncated ratio sits outside the 5% band around the
    // printed closed form
    const auto dir = fresh_dir("poa_violation");
    const ParsedConfig config = parse_config(kTwoPathConfig);
    RunManifest manifest;
    manifest.subcommand = "poa-hiding";
    manifest.seed = 11;
    manifest.out_dir = dir.string();
    RunOptions options;
    options.rho = 0.9;
    options.ell1_values = {8.1};
    CHECK(dispatch(manifest, config, options) == kExitBoundViolation);
}

TEST_CASE("simulate with horizon zero is a validation error") {
    const ParsedConfig config = parse_config(kTwoPathConfig);
    RunManifest manifest;
    manifest.subcommand = "simulate";
    manifest.seed = 11;
    manifest.out_dir = fresh_dir("sim_invalid").string();
    RunOptions options;
    options.policy = "myopic";
    options.horizon = 0;
    CHECK_THROWS_AS(dispatch(manifest, config, options), config_error);
}

TEST_CASE("unknown subcommand is rejected") {
    const ParsedConfig config = parse_config(kTwoPathConfig);
    RunManifest manifest;
    manifest.subcommand = "frobnicate";
    manifest.out_dir = fresh_dir("unknown").string();
    CHECK_THROWS_AS(dispatch(manifest, config, RunOptions{}), config_error);
}

TEST_CASE("rerun from an emitted summary reproduces the CSV byte for byte") {
    const auto dir = fresh_dir("rerun_src");
    ParsedConfig config = parse_config(kCrowdConfig);
    config.experiment.horizon = 15;
    config.experiment.runs = 3;
    RunManifest manifest;
    manifest.config_path = "<inline>";
    manifest.subcommand = "inefficiency";
    manifest.seed = 3;
    manifest.out_dir = dir.string();
    manifest.timestamp = current_timestamp();
    RunOptions options;
    options.policy = "myopic";
    options.threads = 2;
    REQUIRE(dispatch(manifest, config, options) == kExitOk);

    const auto rerun_dir = fresh_dir("rerun_dst");
    REQUIRE(rerun_from_manifest((dir / "inefficiency.json").string(), rerun_dir.string()) ==
            kExitOk);
    CHECK(slurp(dir / "inefficiency.csv") == slurp(rerun_dir / "inefficiency.csv"));
}

TEST_CASE("simulate dispatch records the trajectory with one row per slot") {
    const auto dir = fresh_dir("simulate");
    const ParsedConfig config = parse_config(kTwoPathConfig);
    RunManifest manifest;
    manifest.subcommand = "simulate";
    manifest.seed = 11;
    manifest.out_dir = dir.string();
    RunOptions options;
    options.policy = "sid";
    options.horizon = 12;
    CHECK(dispatch(manifest, config, options) == kExitOk);
    const std::string csv = slurp(dir / "simulate.csv");
    CHECK(csv.rfind("t,action,disclosed,observation,latency,ell0,ell_1,x_1\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
}
