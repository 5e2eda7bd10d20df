#pragma once

#include <stdexcept>
#include <string>

namespace scatter {

// Error taxonomy; the CLI maps each branch to a distinct exit code.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad inputs: malformed config, invalid parameters, out-of-range arguments.
struct ConfigError : Error {
  using Error::Error;
};
struct ParameterError : ConfigError {
  using ConfigError::ConfigError;
};
// Two energies coincide within tolerance; signals rationally dependent k.
struct DegeneracyError : ConfigError {
  using ConfigError::ConfigError;
};
// Requested enumeration exceeds the memory budget.
struct CapacityError : ConfigError {
  using ConfigError::ConfigError;
};

// A computation needs spectrum data outside the enumerated window.
struct CoverageError : Error {
  using Error::Error;
};

// Numerical failures in solvers and downstream constructions.
struct SolverError : Error {
  using Error::Error;
};
// lambda too close to an unperturbed energy.
struct PoleError : SolverError {
  using SolverError::SolverError;
};
struct EmptyTruncationError : SolverError {
  using SolverError::SolverError;
};
struct DegenerateMeasureError : SolverError {
  using SolverError::SolverError;
};
struct FitError : SolverError {
  using SolverError::SolverError;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace scatter
