#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lr {

/// Failure categories surfaced to callers. The CLI maps each category to a
/// process exit code: validation errors exit 1, numerical failures exit 2.
enum class ErrorCode {
    // input / configuration
    NonStochasticRow,
    NegativeProbability,
    BadDiscount,
    DimensionMismatch,
    SpaceMismatch,
    NonUniqueStationary,
    ParseError,
    SchemaError,
    IOError,
    PreconditionViolated,
    PremiseViolated,
    EmptySet,
    RankFailure,
    // numerical
    NonFiniteIterate,
    NoConvergence,
    SingularSystem,
};

std::string_view error_code_name(ErrorCode code);

/// True for failures that arise while iterating (divergence, stalls) rather
/// than from malformed inputs.
bool is_numerical_error(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace lr
