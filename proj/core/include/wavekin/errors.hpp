#pragma once

#include <stdexcept>
#include <string>

namespace wavekin {

/// Bad input value: a precondition on a public operation was violated.
/// The message names the offending field/argument and the violated bound.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Config text could not be parsed. Carries a 1-based line number when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = -1)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// A trajectory left the numerically trusted region.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double t, long long member = -1)
      : std::runtime_error(member >= 0
                               ? "amplitude blow-up at t=" + std::to_string(t) +
                                     " (ensemble member " + std::to_string(member) + ")"
                               : "amplitude blow-up at t=" + std::to_string(t)),
        t_(t),
        member_(member) {}
  double time() const { return t_; }
  long long member() const { return member_; }

 private:
  double t_;
  long long member_;
};

/// Requested explicit step exceeds the stability bound of a grid solver.
class CflError : public std::runtime_error {
 public:
  CflError(double dt, double limit)
      : std::runtime_error("time step " + std::to_string(dt) +
                           " exceeds CFL bound " + std::to_string(limit)),
        dt_(dt),
        limit_(limit) {}
  double requested() const { return dt_; }
  double limit() const { return limit_; }

 private:
  double dt_;
  double limit_;
};

}  // namespace wavekin
