#pragma once

#include <stdexcept>
#include <string>

namespace fracwave {

/// Invalid or inconsistent user configuration. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Stress trace reached the inadmissible branch sigma >= K*d.
class AdmissibilityError : public std::runtime_error {
public:
    explicit AdmissibilityError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Newton iteration on the interface system failed. CLI exit code 3.
class NewtonError : public std::runtime_error {
public:
    explicit NewtonError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite field value detected during time marching. CLI exit code 4.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace fracwave
