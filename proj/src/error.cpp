#include "dst/error.hpp"

namespace dst {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::NonpositiveWeight: return "NonpositiveWeight";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::SameNode: return "SameNode";
    case ErrorCode::Unstable: return "Unstable";
    case ErrorCode::NoInteriorOptimum: return "NoInteriorOptimum";
    case ErrorCode::InfeasibleStart: return "InfeasibleStart";
    case ErrorCode::CaseDomainViolation: return "CaseDomainViolation";
    case ErrorCode::NumericalBlowup: return "NumericalBlowup";
    case ErrorCode::ZeroIdeal: return "ZeroIdeal";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace dst
