#include "wulff/error.hpp"

namespace wulff {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSmoothNorm: return "NonSmoothNorm";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MeasureMismatch: return "MeasureMismatch";
    case ErrorCode::SelfIntersecting: return "SelfIntersecting";
    case ErrorCode::LambdaTooLarge: return "LambdaTooLarge";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::DegenerateDomain: return "DegenerateDomain";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace wulff
