#include "jawtap/error.hpp"

namespace jawtap {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MissingFile: return "MissingFile";
        case ErrorCode::RateMismatch: return "RateMismatch";
        case ErrorCode::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
        case ErrorCode::InvariantViolation: return "InvariantViolation";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::UnknownLabel: return "UnknownLabel";
        case ErrorCode::OutOfOrderSample: return "OutOfOrderSample";
        case ErrorCode::TruncatedEvent: return "TruncatedEvent";
        case ErrorCode::DegenerateSignal: return "DegenerateSignal";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::ModeMismatch: return "ModeMismatch";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::ShapeMismatch: return "ShapeMismatch";
        case ErrorCode::Unreachable: return "Unreachable";
        case ErrorCode::EmptyTemplates: return "EmptyTemplates";
        case ErrorCode::OutOfOrderInput: return "OutOfOrderInput";
        case ErrorCode::UncalibratedThreshold: return "UncalibratedThreshold";
        case ErrorCode::MissingLabelInTrain: return "MissingLabelInTrain";
        case ErrorCode::NoEventsDetected: return "NoEventsDetected";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace jawtap
