// error.hpp
// Error codes shared by every stage of the recognizer.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace jawtap {

enum class ErrorCode {
    MissingFile,
    RateMismatch,
    NonMonotonicTimestamps,
    InvariantViolation,
    IoFailure,
    UnknownLabel,
    OutOfOrderSample,
    TruncatedEvent,
    DegenerateSignal,
    SingleClass,
    ModeMismatch,
    NonConvergence,
    ShapeMismatch,
    Unreachable,
    EmptyTemplates,
    OutOfOrderInput,
    UncalibratedThreshold,
    MissingLabelInTrain,
    NoEventsDetected,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace jawtap
