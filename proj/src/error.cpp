#include "mmrs/error.hpp"

namespace mmrs {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::UnsupportedOperation: return "unsupported-operation";
    case ErrorKind::NonHyperbolic: return "non-hyperbolic-state";
    case ErrorKind::ConstitutiveViolation: return "constitutive-violation";
    case ErrorKind::LimitUndefined: return "limit-undefined";
    case ErrorKind::Bracket: return "bracket";
    case ErrorKind::LocusDegeneracy: return "locus-degeneracy";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::Integration: return "integration";
    case ErrorKind::VacuumSide: return "vacuum-side";
    case ErrorKind::Vacuum: return "vacuum";
    case ErrorKind::ClassificationUnsupported: return "classification-unsupported";
    case ErrorKind::Sampling: return "sampling";
    case ErrorKind::Topology: return "unsupported-topology";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

}  // namespace mmrs
