#pragma once

#include <stdexcept>
#include <string>

namespace uqcoh {

// Every failure the library can diagnose. Callers dispatch on the code, the
// message carries context (offending indices, measured values).
enum class ErrorCode {
    NonPositiveEntry,
    AmbiguousGrouping,
    DimensionMismatch,
    BlockOutOfRange,
    DegenerateTriple,
    QOutOfRange,
    ParameterOrderViolation,
    CompressionTooLarge,
    IllConditionedGap,
    CrossCheckFailed,
    Overflow,
    NoConvergenceWithinBudget,
    CaseMismatch,
    RepresentationMismatch,
    NotNormalized,
    NotACoboundary,
    NotExactRepresentation,
    SpectrumMismatch,
    IndexNotInBlock,
    NoValidSelection,
    SpanShortfall,
    UnsupportedGPCase,
    EliminationFailed,
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::NonPositiveEntry: return "NonPositiveEntry";
        case ErrorCode::AmbiguousGrouping: return "AmbiguousGrouping";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::BlockOutOfRange: return "BlockOutOfRange";
        case ErrorCode::DegenerateTriple: return "DegenerateTriple";
        case ErrorCode::QOutOfRange: return "QOutOfRange";
        case ErrorCode::ParameterOrderViolation: return "ParameterOrderViolation";
        case ErrorCode::CompressionTooLarge: return "CompressionTooLarge";
        case ErrorCode::IllConditionedGap: return "IllConditionedGap";
        case ErrorCode::CrossCheckFailed: return "CrossCheckFailed";
        case ErrorCode::Overflow: return "Overflow";
        case ErrorCode::NoConvergenceWithinBudget: return "NoConvergenceWithinBudget";
        case ErrorCode::CaseMismatch: return "CaseMismatch";
        case ErrorCode::RepresentationMismatch: return "RepresentationMismatch";
        case ErrorCode::NotNormalized: return "NotNormalized";
        case ErrorCode::NotACoboundary: return "NotACoboundary";
        case ErrorCode::NotExactRepresentation: return "NotExactRepresentation";
        case ErrorCode::SpectrumMismatch: return "SpectrumMismatch";
        case ErrorCode::IndexNotInBlock: return "IndexNotInBlock";
        case ErrorCode::NoValidSelection: return "NoValidSelection";
        case ErrorCode::SpanShortfall: return "SpanShortfall";
        case ErrorCode::UnsupportedGPCase: return "UnsupportedGPCase";
        case ErrorCode::EliminationFailed: return "EliminationFailed";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, ErrorCode code, const std::string& what) {
    if (!ok) fail(code, what);
}

}  // namespace uqcoh
