#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace t5drive {

enum class ErrorKind {
    InvalidParameter,
    SingularMassMatrix,
    OutOfScheduleRange,
    NoPhysicalRoot,
    NoBracket,
    ZeroOutputPower,
    InvalidResult,
    DimensionMismatch,
    InfeasibleSolution,
    NonFiniteState,
    InfeasibleInitialization,
    ParseError,
    ValidationError,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::SingularMassMatrix: return "SingularMassMatrix";
    case ErrorKind::OutOfScheduleRange: return "OutOfScheduleRange";
    case ErrorKind::NoPhysicalRoot: return "NoPhysicalRoot";
    case ErrorKind::NoBracket: return "NoBracket";
    case ErrorKind::ZeroOutputPower: return "ZeroOutputPower";
    case ErrorKind::InvalidResult: return "InvalidResult";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InfeasibleSolution: return "InfeasibleSolution";
    case ErrorKind::NonFiniteState: return "NonFiniteState";
    case ErrorKind::InfeasibleInitialization: return "InfeasibleInitialization";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    }
    return "Unknown";
}

/// Error raised by every t5drive operation. `field()` names the offending
/// parameter or config key when there is one.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, std::string message, std::string field = {})
        : std::runtime_error(std::string(to_string(kind)) + ": " + message),
          kind_(kind), field_(std::move(field)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string &field() const noexcept { return field_; }

  private:
    ErrorKind kind_;
    std::string field_;
};

namespace detail {

inline void require(bool ok, ErrorKind kind, std::string_view field,
                    std::string_view what) {
    if (!ok) {
        throw Error(kind, std::string(field) + ": " + std::string(what),
                    std::string(field));
    }
}

} // namespace detail

} // namespace t5drive
