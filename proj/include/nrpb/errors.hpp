// errors.hpp — exception hierarchy shared by every module
//
// ConfigError covers anything the caller can fix by changing inputs (the CLI
// maps it to exit code 2). SolverError covers numerical failures at valid
// inputs (exit code 3).

#pragma once

#include <stdexcept>
#include <string>

namespace nrpb {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Truncation or matrix dimension out of range.
class DimensionError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Non-square or mismatched operands.
class ShapeError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Liouvillian would exceed the dense-storage guard.
class SizeError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class SingularSystemError : public SolverError {
public:
    using SolverError::SolverError;
};

// g2 or Mandel Q requested for a state without photons.
class UndefinedCorrelationError : public SolverError {
public:
    using SolverError::SolverError;
};

class NonUniqueSteadyStateError : public SolverError {
public:
    using SolverError::SolverError;
};

class StiffnessError : public SolverError {
public:
    using SolverError::SolverError;
};

} // namespace nrpb
