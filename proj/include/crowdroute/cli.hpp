#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crowdroute/config_io.hpp"

namespace crowdroute {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes for dispatch.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitBoundViolation = 2;

/// Provenance record written verbatim into every output JSON.
struct RunManifest {
    std::string config_path;
    std::string subcommand;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string tool_version = kToolVersion;
    std::string timestamp;
};

/// Flag-level overrides and subcommand arguments.
struct RunOptions {
    std::optional<double> rho;          // poa-* subcommands
    std::optional<std::string> policy;  // simulate / inefficiency
    std::optional<int> horizon;
    std::vector<double> ell1_values;    // poa-hiding
    int threads = 1;
};

/// Runs `manifest.subcommand`, writing <outdir>/<subcommand>.csv and .json.
/// Returns kExitOk, or kExitBoundViolation when a poa-* report violates its
/// bound. Validation problems raise config_error / invalid_argument, which
/// the binary maps to kExitValidation.
int dispatch(const RunManifest& manifest, const ParsedConfig& config,
             const RunOptions& options);

/// Re-executes the run recorded in an emitted JSON summary, using the
/// embedded resolved configuration, seed and options. Output lands in
/// `out_dir`. CSV output is byte-identical to the original run's.
int rerun_from_manifest(const std::string& manifest_json_path, const std::string& out_dir);

/// Current wall-clock time, ISO 8601 UTC. Lives in the JSON only, never in
/// a CSV.
std::string current_timestamp();

} // namespace crowdroute
