#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pfm {

enum class ErrorKind {
  MassSumViolation,
  UnknownPoint,
  NegativeMass,
  SpaceMismatch,
  ParameterOutOfRange,
  NotInPf,
  DegenerateSupport,
  OutsideDomain,
  OutsideNeighborhood,
  WitnessInvalid,
  UnknownMap,
  UnsupportedDimension,
  InvalidSpace,
  InvalidPointMap,
  InvalidEmbedding,
  InvalidArgument,
};

constexpr std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MassSumViolation: return "MassSumViolation";
    case ErrorKind::UnknownPoint: return "UnknownPoint";
    case ErrorKind::NegativeMass: return "NegativeMass";
    case ErrorKind::SpaceMismatch: return "SpaceMismatch";
    case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorKind::NotInPf: return "NotInPf";
    case ErrorKind::DegenerateSupport: return "DegenerateSupport";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::OutsideNeighborhood: return "OutsideNeighborhood";
    case ErrorKind::WitnessInvalid: return "WitnessInvalid";
    case ErrorKind::UnknownMap: return "UnknownMap";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::InvalidSpace: return "InvalidSpace";
    case ErrorKind::InvalidPointMap: return "InvalidPointMap";
    case ErrorKind::InvalidEmbedding: return "InvalidEmbedding";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Domain error raised by every operation whose precondition fails.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(error_name(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Broken internal invariant (a bug, not bad input).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pfm
