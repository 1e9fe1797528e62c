#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nonvanish {

/// Failure categories surfaced by the pipelines. The names are part of the
/// report format (the "error" field) and must stay stable.
enum class ErrorCode {
  NonConvergence,
  EmptySampleSet,
  DegreeCapExceeded,
  InvalidArgument,
  InvalidRegion,
  NoExteriorPointFound,
  CycleDetected,
  MultipleContactPoints,
  ComplementNotConnected,
  UnsupportedGeometry,
  TheodorsenDivergence,
  InverseNonConvergence,
  IllConditioned,
  XiUnderflow,
  InteriorZero,
  NonvanishingCheckFailed,
  ContactZero,
  PoleInRegion,
  NudgeBudgetUnreachable,
  GlueBudgetUnreachable,
  PoleProximity,
  OutOfValidity,
  ContourThroughZero,
  WindingResidual,
  DomainError,
  ZeroOnK0,
  InconsistentSampling,
  SchemaError,
};

constexpr std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::EmptySampleSet: return "EmptySampleSet";
    case ErrorCode::DegreeCapExceeded: return "DegreeCapExceeded";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidRegion: return "InvalidRegion";
    case ErrorCode::NoExteriorPointFound: return "NoExteriorPointFound";
    case ErrorCode::CycleDetected: return "CycleDetected";
    case ErrorCode::MultipleContactPoints: return "MultipleContactPoints";
    case ErrorCode::ComplementNotConnected: return "ComplementNotConnected";
    case ErrorCode::UnsupportedGeometry: return "UnsupportedGeometry";
    case ErrorCode::TheodorsenDivergence: return "TheodorsenDivergence";
    case ErrorCode::InverseNonConvergence: return "InverseNonConvergence";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::XiUnderflow: return "XiUnderflow";
    case ErrorCode::InteriorZero: return "InteriorZero";
    case ErrorCode::NonvanishingCheckFailed: return "NonvanishingCheckFailed";
    case ErrorCode::ContactZero: return "ContactZero";
    case ErrorCode::PoleInRegion: return "PoleInRegion";
    case ErrorCode::NudgeBudgetUnreachable: return "NudgeBudgetUnreachable";
    case ErrorCode::GlueBudgetUnreachable: return "GlueBudgetUnreachable";
    case ErrorCode::PoleProximity: return "PoleProximity";
    case ErrorCode::OutOfValidity: return "OutOfValidity";
    case ErrorCode::ContourThroughZero: return "ContourThroughZero";
    case ErrorCode::WindingResidual: return "WindingResidual";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::ZeroOnK0: return "ZeroOnK0";
    case ErrorCode::InconsistentSampling: return "InconsistentSampling";
    case ErrorCode::SchemaError: return "SchemaError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace nonvanish
