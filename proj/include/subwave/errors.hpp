#pragma once

#include <stdexcept>
#include <string>

namespace subwave {

// Failure categories, grouped by the process exit code the CLI maps them to:
//   2 invalid input/config, 3 mathematical refusal (the requested object does
//   not exist or is excluded), 4 half-plane violation for switched designs,
//   5 numerical breakdown.
enum class ErrorCode {
    // config / input
    OverlappingResonators,
    ZeroMaterialParameter,
    DimensionMismatch,
    DefectOutOfRange,
    BadInput,
    // mathematical refusals
    OnSingularPoint,
    OnBand,
    RootOnBand,
    NotPTSymmetric,
    DegenerateQuadratic,
    ZeroDenominator,
    ZeroIntegral,
    ZeroFrequency,
    ZeroB,
    NoDefectMode,
    // half-plane
    WrongHalfPlane,
    // numerical
    NoConvergence,
    SingularSystem,
    GreenEvalFailed,
    EigenFailure,
    SingularJacobian,
    VerificationFailed,
};

inline int exit_code_for(ErrorCode c) {
    switch (c) {
    case ErrorCode::OverlappingResonators:
    case ErrorCode::ZeroMaterialParameter:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::DefectOutOfRange:
    case ErrorCode::BadInput:
        return 2;
    case ErrorCode::OnSingularPoint:
    case ErrorCode::OnBand:
    case ErrorCode::RootOnBand:
    case ErrorCode::NotPTSymmetric:
    case ErrorCode::DegenerateQuadratic:
    case ErrorCode::ZeroDenominator:
    case ErrorCode::ZeroIntegral:
    case ErrorCode::ZeroFrequency:
    case ErrorCode::ZeroB:
    case ErrorCode::NoDefectMode:
        return 3;
    case ErrorCode::WrongHalfPlane:
        return 4;
    default:
        return 5;
    }
}

inline const char* name_of(ErrorCode c) {
    switch (c) {
    case ErrorCode::OverlappingResonators: return "OverlappingResonators";
    case ErrorCode::ZeroMaterialParameter: return "ZeroMaterialParameter";
    case ErrorCode::DimensionMismatch:     return "DimensionMismatch";
    case ErrorCode::DefectOutOfRange:      return "DefectOutOfRange";
    case ErrorCode::BadInput:              return "BadInput";
    case ErrorCode::OnSingularPoint:       return "OnSingularPoint";
    case ErrorCode::OnBand:                return "OnBand";
    case ErrorCode::RootOnBand:            return "RootOnBand";
    case ErrorCode::NotPTSymmetric:        return "NotPTSymmetric";
    case ErrorCode::DegenerateQuadratic:   return "DegenerateQuadratic";
    case ErrorCode::ZeroDenominator:       return "ZeroDenominator";
    case ErrorCode::ZeroIntegral:          return "ZeroIntegral";
    case ErrorCode::ZeroFrequency:         return "ZeroFrequency";
    case ErrorCode::ZeroB:                 return "ZeroB";
    case ErrorCode::NoDefectMode:          return "NoDefectMode";
    case ErrorCode::WrongHalfPlane:        return "WrongHalfPlane";
    case ErrorCode::NoConvergence:         return "NoConvergence";
    case ErrorCode::SingularSystem:        return "SingularSystem";
    case ErrorCode::GreenEvalFailed:       return "GreenEvalFailed";
    case ErrorCode::EigenFailure:          return "EigenFailure";
    case ErrorCode::SingularJacobian:      return "SingularJacobian";
    case ErrorCode::VerificationFailed:    return "VerificationFailed";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(name_of(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }
    int exit_code() const { return exit_code_for(code_); }
private:
    ErrorCode code_;
};

} // namespace subwave
