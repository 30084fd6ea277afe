#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace soca {

enum class ErrorCode {
    NegativeProbability,
    NotNormalized,
    DimensionMismatch,
    EmptySpec,
    DomainError,
    DegenerateSigma,
    BoundaryTEqualsEps,
    EntropyOrder,
    CapExceeded,
    BadInput,
};

const char* to_string(ErrorCode code);

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

/// One invariant violation found by validation; validators report all of them.
struct Violation {
    ErrorCode code;
    std::string message;
};

}  // namespace soca
