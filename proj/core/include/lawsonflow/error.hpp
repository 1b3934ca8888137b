#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lawson {

enum class ErrorCode {
  DimensionError,
  ParameterError,
  DomainError,
  NonConvergence,
  IntegrationBlowup,
  ChartFold,
  FitDegenerate,
  MeshTooCoarse,
  ConeBreach,
  ParameterClash,
  BlendFailure,
  OverlapMismatch,
  SolveFailure,
  TipCollapse,
  CurveDegenerate,
  ChartCoverage,
  RootFindStall,
  DenominatorBreach,
  SpanTooShort,
  WindowUncovered,
  ParseError,
  ConstraintViolation,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure in the library surfaces as this type; code() tells callers what went wrong.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace lawson
