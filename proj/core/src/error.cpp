#include "lawsonflow/error.hpp"

namespace lawson {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionError: return "DimensionError";
    case ErrorCode::ParameterError: return "ParameterError";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::IntegrationBlowup: return "IntegrationBlowup";
    case ErrorCode::ChartFold: return "ChartFold";
    case ErrorCode::FitDegenerate: return "FitDegenerate";
    case ErrorCode::MeshTooCoarse: return "MeshTooCoarse";
    case ErrorCode::ConeBreach: return "ConeBreach";
    case ErrorCode::ParameterClash: return "ParameterClash";
    case ErrorCode::BlendFailure: return "BlendFailure";
    case ErrorCode::OverlapMismatch: return "OverlapMismatch";
    case ErrorCode::SolveFailure: return "SolveFailure";
    case ErrorCode::TipCollapse: return "TipCollapse";
    case ErrorCode::CurveDegenerate: return "CurveDegenerate";
    case ErrorCode::ChartCoverage: return "ChartCoverage";
    case ErrorCode::RootFindStall: return "RootFindStall";
    case ErrorCode::DenominatorBreach: return "DenominatorBreach";
    case ErrorCode::SpanTooShort: return "SpanTooShort";
    case ErrorCode::WindowUncovered: return "WindowUncovered";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace lawson
