#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace darts271 {

enum class ErrorCode {
    InvalidScore,
    GameAlreadyOver,
    IncompleteGame,
    MalformedRow,
    IncompleteRound,
    InconsistentOpponents,
    NonTerminalGame,
    EmptySystem,
    DegenerateInput,
    NonConvergence,
    InvalidWeights,
    EmptyFilter,
    MisalignedTraces,
    UnknownModelName,
    SamePlayer,
    UnknownPlayer,
    NoSuchGame,
    DuplicateRound,
    InvalidConfig,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Validation errors are caused by bad input; everything else is internal.
bool is_validation_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message, std::string detail = {})
        : std::runtime_error(std::move(message)), code_(code), detail_(std::move(detail)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

} // namespace darts271
