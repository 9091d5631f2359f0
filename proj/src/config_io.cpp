#include "crowdroute/config_io.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "crowdroute/errors.hpp"

namespace crowdroute {

namespace {

std::string trim(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

double parse_number(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE)
        throw config_error("invalid config: " + key + " is not a number: '" + value + "'");
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_number(key, value);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw config_error("invalid config: " + key + " must be an integer");
    return i;
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE)
        throw config_error("invalid config: " + key + " is not a valid seed: '" + value + "'");
    return static_cast<std::uint64_t>(v);
}

const std::set<std::string> kKnownKeys = {
    "n_risky", "alpha", "alpha_low", "alpha_high", "q_ll", "q_hh", "p_h", "p_l",
    "delta_ell", "rho",
    "planner_horizon", "terminal_mode", "bisection_tol", "bracket_cap", "node_cap",
    "ell0_init", "ell_risky_init", "x_init", "horizon", "runs", "seed", "grid_points",
    "mode", "epsilon_offset", "probability_limit",
};

const std::vector<std::string> kRequiredKeys = {
    "n_risky", "alpha", "alpha_low", "alpha_high", "q_ll", "q_hh", "p_h", "p_l",
    "delta_ell", "rho",
};

} // namespace

SystemState ExperimentParams::initial_state(const NetworkConfig& cfg) const {
    const auto n = static_cast<std::size_t>(cfg.n_risky);
    return SystemState::make(ell0_init, std::vector<double>(n, ell_risky_init),
                             std::vector<double>(n, initial_belief(cfg)));
}

ParsedConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> entries;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw config_error("invalid config: line " + std::to_string(line_no) +
                               " has no '=' separator");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw config_error("invalid config: line " + std::to_string(line_no) +
                               " has an empty key or value");
        if (!kKnownKeys.count(key))
            throw config_error("invalid config: unknown key '" + key + "'");
        if (entries.count(key))
            throw config_error("invalid config: duplicate key '" + key + "'");
        entries[key] = value;
    }

    for (const std::string& key : kRequiredKeys)
        if (!entries.count(key))
            throw config_error("invalid config: missing key '" + key + "'");

    ParsedConfig out;
    const auto number = [&](const char* key, double fallback) {
        auto it = entries.find(key);
        return it == entries.end() ? fallback : parse_number(key, it->second);
    };
    const auto integer = [&](const char* key, int fallback) {
        auto it = entries.find(key);
        return it == entries.end() ? fallback : parse_int(key, it->second);
    };

    out.network.n_risky = integer("n_risky", 1);
    out.network.alpha = number("alpha", 0.0);
    out.network.alpha_low = number("alpha_low", 0.0);
    out.network.alpha_high = number("alpha_high", 0.0);
    out.network.q_ll = number("q_ll", 0.0);
    out.network.q_hh = number("q_hh", 0.0);
    out.network.p_h = number("p_h", 0.0);
    out.network.p_l = number("p_l", 0.0);
    out.network.delta_ell = number("delta_ell", 0.0);
    out.network.rho = number("rho", 0.0);
    out.network.validate();

    out.planner.horizon = integer("planner_horizon", out.planner.horizon);
    out.planner.bisection_tol = number("bisection_tol", out.planner.bisection_tol);
    out.planner.bracket_cap = number("bracket_cap", out.planner.bracket_cap);
    if (entries.count("node_cap")) {
        const double cap = parse_number("node_cap", entries["node_cap"]);
        if (cap < 1.0) throw config_error("invalid config: node_cap must be >= 1");
        out.planner.node_cap = static_cast<std::uint64_t>(cap);
    }
    if (entries.count("terminal_mode")) {
        const std::string& mode = entries["terminal_mode"];
        if (mode == "zero")
            out.planner.terminal_mode = TerminalValueMode::Zero;
        else if (mode == "perpetuity")
            out.planner.terminal_mode = TerminalValueMode::Perpetuity;
        else
            throw config_error("invalid config: terminal_mode must be 'zero' or 'perpetuity'");
    }
    out.planner.validate();

    out.experiment.ell0_init = number("ell0_init", 0.0);
    out.experiment.ell_risky_init = number("ell_risky_init", 0.0);
    if (entries.count("x_init")) out.experiment.x_init = parse_number("x_init", entries["x_init"]);
    out.experiment.horizon = integer("horizon", out.experiment.horizon);
    out.experiment.runs = integer("runs", out.experiment.runs);
    if (entries.count("seed")) out.experiment.seed = parse_seed("seed", entries["seed"]);
    out.experiment.grid_points = integer("grid_points", out.experiment.grid_points);
    if (entries.count("mode")) {
        const std::string& mode = entries["mode"];
        if (mode == "belief")
            out.experiment.mode = SimulationMode::Belief;
        else if (mode == "ground-truth")
            out.experiment.mode = SimulationMode::GroundTruth;
        else
            throw config_error("invalid config: mode must be 'belief' or 'ground-truth'");
    }
    out.experiment.offsets.offset = number("epsilon_offset", out.experiment.offsets.offset);
    out.experiment.offsets.prob_limit =
        number("probability_limit", out.experiment.offsets.prob_limit);

    if (out.experiment.ell0_init < 0.0)
        throw config_error("invalid config: ell0_init must be >= 0");
    if (out.experiment.ell_risky_init < 0.0)
        throw config_error("invalid config: ell_risky_init must be >= 0");
    if (out.experiment.x_init && (*out.experiment.x_init < 0.0 || *out.experiment.x_init > 1.0))
        throw config_error("invalid config: x_init must lie in [0,1]");
    if (out.experiment.horizon < 1)
        throw config_error("invalid config: horizon must be >= 1");
    if (out.experiment.runs < 1)
        throw config_error("invalid config: runs must be >= 1");
    if (out.experiment.grid_points < 2)
        throw config_error("invalid config: grid_points must be >= 2");
    if (out.experiment.offsets.offset <= 0.0)
        throw config_error("invalid config: epsilon_offset must be > 0");
    if (out.experiment.offsets.prob_limit <= 0.0 || out.experiment.offsets.prob_limit >= 1.0)
        throw config_error("invalid config: probability_limit must lie in (0,1)");
    return out;
}

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::map<std::string, std::string> ParsedConfig::resolved() const {
    std::map<std::string, std::string> out;
    out["n_risky"] = std::to_string(network.n_risky);
    out["alpha"] = format_double(network.alpha);
    out["alpha_low"] = format_double(network.alpha_low);
    out["alpha_high"] = format_double(network.alpha_high);
    out["q_ll"] = format_double(network.q_ll);
    out["q_hh"] = format_double(network.q_hh);
    out["p_h"] = format_double(network.p_h);
    out["p_l"] = format_double(network.p_l);
    out["delta_ell"] = format_double(network.delta_ell);
    out["rho"] = format_double(network.rho);
    out["planner_horizon"] = std::to_string(planner.horizon);
    out["terminal_mode"] =
        planner.terminal_mode == TerminalValueMode::Zero ? "zero" : "perpetuity";
    out["bisection_tol"] = format_double(planner.bisection_tol);
    out["bracket_cap"] = format_double(planner.bracket_cap);
    out["node_cap"] = std::to_string(planner.node_cap);
    out["ell0_init"] = format_double(experiment.ell0_init);
    out["ell_risky_init"] = format_double(experiment.ell_risky_init);
    out["x_init"] = format_double(experiment.initial_belief(network));
    out["horizon"] = std::to_string(experiment.horizon);
    out["runs"] = std::to_string(experiment.runs);
    if (experiment.seed) out["seed"] = std::to_string(*experiment.seed);
    out["grid_points"] = std::to_string(experiment.grid_points);
    out["mode"] = experiment.mode == SimulationMode::Belief ? "belief" : "ground-truth";
    out["epsilon_offset"] = format_double(experiment.offsets.offset);
    out["probability_limit"] = format_double(experiment.offsets.prob_limit);
    return out;
}

} // namespace crowdroute
