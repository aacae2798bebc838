#pragma once

#include <stdexcept>
#include <string>

namespace quadshift {

/// Arguments outside the domain of an operation (bad quantum numbers,
/// non-positive frequencies, missing level data).
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure could not deliver the requested accuracy:
/// resonance singularities, quadrature or fit non-convergence, integrator
/// step-size collapse.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed configuration or species files.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace quadshift
