#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rankskew {

enum class ErrorCode {
    TooShort,
    ZeroVariance,
    NoRateCoverage,
    WrongPeriod,
    EmptyInput,
    InvalidSeries,
    InsufficientOverlap,
    SignChangeInWindow,
    TooFewPoints,
    InvalidParams,
    NegativeDensity,
    MomentDoesNotExist,
    TooFewAssets,
    MissingRate,
    TooFewRows,
    DegenerateX,
    SingularWindow,
    Parse,
    IOWrite,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI exit-code mapping) can dispatch without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::NoRateCoverage: return "NoRateCoverage";
    case ErrorCode::WrongPeriod: return "WrongPeriod";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidSeries: return "InvalidSeries";
    case ErrorCode::InsufficientOverlap: return "InsufficientOverlap";
    case ErrorCode::SignChangeInWindow: return "SignChangeInWindow";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NegativeDensity: return "NegativeDensity";
    case ErrorCode::MomentDoesNotExist: return "MomentDoesNotExist";
    case ErrorCode::TooFewAssets: return "TooFewAssets";
    case ErrorCode::MissingRate: return "MissingRate";
    case ErrorCode::TooFewRows: return "TooFewRows";
    case ErrorCode::DegenerateX: return "DegenerateX";
    case ErrorCode::SingularWindow: return "SingularWindow";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::IOWrite: return "IOWrite";
    }
    return "Unknown";
}

}  // namespace rankskew
