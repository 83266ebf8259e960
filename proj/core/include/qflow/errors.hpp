#pragma once
#include <cstddef>
#include <stdexcept>
#include <string>

namespace qflow {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad configuration: unknown keys, type mismatches, out-of-range parameters,
/// incompatible geometry. Messages carry the offending key and, for file input,
/// the line number.
struct ConfigError : Error {
  using Error::Error;
};

/// Frame vectors not normalized or not orthogonal within tolerance.
struct FrameError : Error {
  using Error::Error;
};

/// Non-finite value detected during time integration.
struct DivergenceError : Error {
  std::size_t index;  ///< flattened index of the first offending point
  int component;      ///< component slot 0..4 at that point
  double time;        ///< simulation time at detection
  DivergenceError(const std::string& msg, std::size_t idx, int comp, double t)
      : Error(msg), index(idx), component(comp), time(t) {}
};

/// An input that must be a converged static solution is not converged.
struct StaleInputError : Error {
  using Error::Error;
};

/// Iterative solver exhausted its budget before reaching tolerance.
struct ConvergenceError : Error {
  double final_residual;
  ConvergenceError(const std::string& msg, double res)
      : Error(msg), final_residual(res) {}
};

}  // namespace qflow
