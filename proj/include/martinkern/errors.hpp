#pragma once

#include <stdexcept>
#include <string>

namespace martinkern {

enum class ErrorCode {
    Parse,
    InvalidSpec,
    InvalidPath,
    NonConvergence,
    SingularJet,
    ZeroDenominator,
    VanishingGreen,
    DenominatorNearOne,
    ArcTooCoarse,
    HorizonExceeded,
    TailNotControlled,
    BallTooLarge,
    NotResolved,
    OutOfDomain,
    NotPolyharmonic,
    InsufficientRadius,
    BranchCut,
    ZeroLambda,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what),
          code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidPath: return "InvalidPath";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::SingularJet: return "DivisionBySingularJet";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::VanishingGreen: return "VanishingGreen";
    case ErrorCode::DenominatorNearOne: return "DenominatorNearOne";
    case ErrorCode::ArcTooCoarse: return "ArcTooCoarse";
    case ErrorCode::HorizonExceeded: return "HorizonExceeded";
    case ErrorCode::TailNotControlled: return "TailNotControlled";
    case ErrorCode::BallTooLarge: return "BallTooLarge";
    case ErrorCode::NotResolved: return "NotResolved";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NotPolyharmonic: return "NotPolyharmonic";
    case ErrorCode::InsufficientRadius: return "InsufficientRadius";
    case ErrorCode::BranchCut: return "BranchCut";
    case ErrorCode::ZeroLambda: return "ZeroLambda";
    }
    return "Unknown";
}

} // namespace martinkern
