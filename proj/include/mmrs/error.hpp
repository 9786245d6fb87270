#pragma once

#include <stdexcept>
#include <string>

namespace mmrs {

enum class ErrorKind {
  Domain,
  UnsupportedOperation,
  NonHyperbolic,
  ConstitutiveViolation,
  LimitUndefined,
  Bracket,
  LocusDegeneracy,
  NonConvergence,
  Integration,
  VacuumSide,
  Vacuum,
  ClassificationUnsupported,
  Sampling,
  Topology,
  Parse,
  Validation,
  Io,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& msg);

}  // namespace mmrs
