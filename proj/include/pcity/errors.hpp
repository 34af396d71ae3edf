#pragma once

#include <stdexcept>
#include <string>

namespace pcity {

/// Base class for all library errors; what() carries the named kind as a prefix,
/// e.g. "MalformedHeader: unexpected token in $Nodes".
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

/// Mesh-file and mesh-construction failures.
class MeshError : public Error {
public:
    using Error::Error;
};

/// Scenario/config failures (bad key, invariant violation). CLI maps these to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Iterative solver failures; carries the residual actually achieved.
class SolveError : public Error {
public:
    SolveError(std::string kind, const std::string& msg, double achieved_residual, int iterations)
        : Error(std::move(kind), msg), residual(achieved_residual), iterations(iterations) {}
    double residual;
    int iterations;
};

/// Stage failure wrapper used by the pipeline; names the failing stage. Exit code 3.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& cause)
        : Error("StageError", stage + ": " + cause), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

} // namespace pcity
