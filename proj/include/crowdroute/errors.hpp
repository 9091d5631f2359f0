#pragma once

#include <stdexcept>
#include <string>

namespace crowdroute {

/// Configuration text failed validation; message names the offending key.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A latency exceeded the overflow guard (possible since alpha_high >= 1).
class divergence_error : public std::runtime_error {
public:
    explicit divergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// The expectimax tree exceeded the configured node budget.
class node_cap_error : public std::runtime_error {
public:
    explicit node_cap_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bisection bracket endpoints have inconsistent signs (non-monotone gap).
class bracket_error : public std::runtime_error {
public:
    explicit bracket_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// NaN or other numerical breakdown inside an otherwise valid computation.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace crowdroute
