#include "darts271/error.hpp"

namespace darts271 {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidScore: return "InvalidScore";
    case ErrorCode::GameAlreadyOver: return "GameAlreadyOver";
    case ErrorCode::IncompleteGame: return "IncompleteGame";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::IncompleteRound: return "IncompleteRound";
    case ErrorCode::InconsistentOpponents: return "InconsistentOpponents";
    case ErrorCode::NonTerminalGame: return "NonTerminalGame";
    case ErrorCode::EmptySystem: return "EmptySystem";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::EmptyFilter: return "EmptyFilter";
    case ErrorCode::MisalignedTraces: return "MisalignedTraces";
    case ErrorCode::UnknownModelName: return "UnknownModelName";
    case ErrorCode::SamePlayer: return "SamePlayer";
    case ErrorCode::UnknownPlayer: return "UnknownPlayer";
    case ErrorCode::NoSuchGame: return "NoSuchGame";
    case ErrorCode::DuplicateRound: return "DuplicateRound";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

bool is_validation_error(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::NonConvergence:
    case ErrorCode::Io:
        return false;
    default:
        return true;
    }
}

} // namespace darts271
