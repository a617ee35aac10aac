// diagnostics.hpp
// Non-fatal pipeline conditions, serialized as JSON lines in verbose mode.

#pragma once

#include <string>
#include <string_view>

namespace jawtap {

enum class DiagnosticKind { GapDetected, TruncatedEvent, HoldTimeout, NoiseRejected, ReleaseDetected };

struct Diagnostic {
    DiagnosticKind kind;
    double t = 0.0;
    std::string detail;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::string_view to_string(DiagnosticKind kind);
std::string to_json_line(const Diagnostic& d);

}  // namespace jawtap
