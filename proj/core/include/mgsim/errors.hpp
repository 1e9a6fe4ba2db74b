#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mgsim {

/// Invalid run configuration. Carries every violation found, each prefixed by
/// the offending field path (e.g. "operator.mg.omega: must be > 0").
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// NaN/Inf in a state, or an unstable run.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable, corrupt or unwritable files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mgsim
