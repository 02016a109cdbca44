#include "magtorus/error.hpp"

namespace magtorus {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::NotHermitian: return "not hermitian";
    case ErrorKind::Precondition: return "precondition violated";
    case ErrorKind::DegenerateLinkage: return "degenerate linkage";
    case ErrorKind::SamplingExhausted: return "sampling exhausted";
    case ErrorKind::Nonsmooth: return "nonsmooth point";
    case ErrorKind::NotCritical: return "not critical";
    case ErrorKind::DegenerateNormal: return "degenerate normal data";
    case ErrorKind::Genericity: return "genericity failure";
    case ErrorKind::CapExceeded: return "cap exceeded";
    case ErrorKind::Verification: return "verification failure";
  }
  return "unknown";
}

}  // namespace magtorus
