#pragma once

#include <stdexcept>
#include <string>

namespace se2diff {

/// Invalid parameters, dimension mismatches, unstable time steps.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input data outside an operation's domain (e.g. nonpositive fiber values,
/// fully masked images).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Reverse-time integration diverged. Carries the step at which growth
/// exceeded the guard and, when raised inside an alternation loop, the
/// iteration it happened in (-1 otherwise).
class BlowupError : public std::runtime_error {
public:
    BlowupError(const std::string& msg, long step, long iteration = -1)
        : std::runtime_error(msg), step_(step), iteration_(iteration) {}

    long step() const noexcept { return step_; }
    long iteration() const noexcept { return iteration_; }

private:
    long step_;
    long iteration_;
};

/// File reading/writing failures, with a short format diagnosis.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace se2diff
