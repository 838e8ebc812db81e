#include "twirlab/error.hpp"

namespace twirlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::ValidationFailure: return "ValidationFailure";
    case ErrorCode::NotAGroup: return "NotAGroup";
    case ErrorCode::LabelMismatch: return "LabelMismatch";
    case ErrorCode::CertificationError: return "CertificationError";
    case ErrorCode::UnsupportedSize: return "UnsupportedSize";
    case ErrorCode::ActionNotPhysical: return "ActionNotPhysical";
    case ErrorCode::InconsistentWorlds: return "InconsistentWorlds";
    case ErrorCode::TrivialAction: return "TrivialAction";
    case ErrorCode::NotSeparable: return "NotSeparable";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::BadParam: return "BadParam";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::DimensionError: return "DimensionError";
    case ErrorCode::UnknownBuiltin: return "UnknownBuiltin";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace twirlab
