#pragma once

#include <stdexcept>
#include <string>

namespace majorize {

enum class Errc {
    NotHermitian,
    NotUnitary,
    NotCommuting,
    NoConvergence,
    DegenerateSplitFailure,
    DimensionMismatch,
    SolverFailure,
    NoPerfectMatching,
    NotMajorized,
    LengthMismatch,
    EmptyBlocks,
    WrongDimension,
    NotProbability,
    NotDoublyStochastic,
    SpaceMismatch,
    NotPointwiseMajorized,
    NotAWitness,
    EpsilonTooSmall,
    UnknownDemo,
    InvalidArgument,
    ParseError,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::NotHermitian: return "NotHermitian";
        case Errc::NotUnitary: return "NotUnitary";
        case Errc::NotCommuting: return "NotCommuting";
        case Errc::NoConvergence: return "NoConvergence";
        case Errc::DegenerateSplitFailure: return "DegenerateSplitFailure";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::SolverFailure: return "SolverFailure";
        case Errc::NoPerfectMatching: return "NoPerfectMatching";
        case Errc::NotMajorized: return "NotMajorized";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::EmptyBlocks: return "EmptyBlocks";
        case Errc::WrongDimension: return "WrongDimension";
        case Errc::NotProbability: return "NotProbability";
        case Errc::NotDoublyStochastic: return "NotDoublyStochastic";
        case Errc::SpaceMismatch: return "SpaceMismatch";
        case Errc::NotPointwiseMajorized: return "NotPointwiseMajorized";
        case Errc::NotAWitness: return "NotAWitness";
        case Errc::EpsilonTooSmall: return "EpsilonTooSmall";
        case Errc::UnknownDemo: return "UnknownDemo";
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Library-wide exception carrying a stable error code.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
    if (!cond) fail(code, what);
}

}  // namespace majorize
