#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace pulse {

/// Bad or inconsistent input (config keys, grid sizes, ellipticity). CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Failure of a numerical procedure. Carries the offending quantities so callers
/// can report them (e.g. the measured contraction factor). CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what,
                          std::map<std::string, double> diagnostics = {})
      : std::runtime_error(format(what, diagnostics)), diagnostics_(std::move(diagnostics)) {}

  const std::map<std::string, double>& diagnostics() const noexcept { return diagnostics_; }

private:
  static std::string format(const std::string& what, const std::map<std::string, double>& d) {
    if (d.empty()) return what;
    std::ostringstream os;
    os.precision(10);
    os << what << " [";
    bool first = true;
    for (const auto& [k, v] : d) {
      os << (first ? "" : ", ") << k << "=" << v;
      first = false;
    }
    os << "]";
    return os.str();
  }

  std::map<std::string, double> diagnostics_;
};

/// A precondition on the mathematical domain of an operation is not met
/// (subcritical speed, nonpositive test function, stable zero state).
class DomainError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// Iterative procedure did not reach its tolerance.
class ConvergenceError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

}  // namespace pulse
