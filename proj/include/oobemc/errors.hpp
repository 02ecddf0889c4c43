#pragma once

#include <stdexcept>
#include <string>

namespace oobemc {

// Thrown when dB-domain quantities with different reference bandwidths
// are combined without an explicit rescale.
class UnitMismatchError : public std::invalid_argument {
 public:
  explicit UnitMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

// Scenario file or scenario field rejected at load time.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Two run manifests that are not comparable (different seed, or scenarios
// differing beyond the declared knob).
class PairingError : public std::runtime_error {
 public:
  explicit PairingError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failures, reported with the offending path.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace oobemc
