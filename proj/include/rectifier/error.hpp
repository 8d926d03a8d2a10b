#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rectifier {

enum class ErrorCode {
    InvalidArgument,
    ParseError,
    NonPrimeCharacteristic,
    CompositeP,
    CompositeQ,
    OrderOverflow,
    OrderTooLarge,
    DimensionMismatch,
    NonSquareInput,
    NoFreeDeltaFound,
    MaterializeTooLarge,
    TooLargeToMaterialize,
    CountOverflow,
    BudgetExceeded,
    NotKFree,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonPrimeCharacteristic: return "NonPrimeCharacteristic";
    case ErrorCode::CompositeP: return "CompositeP";
    case ErrorCode::CompositeQ: return "CompositeQ";
    case ErrorCode::OrderOverflow: return "OrderOverflow";
    case ErrorCode::OrderTooLarge: return "OrderTooLarge";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonSquareInput: return "NonSquareInput";
    case ErrorCode::NoFreeDeltaFound: return "NoFreeDeltaFound";
    case ErrorCode::MaterializeTooLarge: return "MaterializeTooLarge";
    case ErrorCode::TooLargeToMaterialize: return "TooLargeToMaterialize";
    case ErrorCode::CountOverflow: return "CountOverflow";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotKFree: return "NotKFree";
    }
    return "Unknown";
}

/// Base exception for every failure raised by the library. The code is stable
/// and is what the command-line tool maps onto exit statuses.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

} // namespace rectifier
