#include "jawtap/diagnostics.hpp"

#include <json.hpp>

namespace jawtap {

std::string_view to_string(DiagnosticKind kind) {
    switch (kind) {
        case DiagnosticKind::GapDetected: return "GapDetected";
        case DiagnosticKind::TruncatedEvent: return "TruncatedEvent";
        case DiagnosticKind::HoldTimeout: return "HoldTimeout";
        case DiagnosticKind::NoiseRejected: return "NoiseRejected";
        case DiagnosticKind::ReleaseDetected: return "ReleaseDetected";
    }
    return "Unknown";
}

std::string to_json_line(const Diagnostic& d) {
    nlohmann::json j = {{"diagnostic", std::string(to_string(d.kind))}, {"t", d.t}};
    if (!d.detail.empty()) j["detail"] = d.detail;
    return j.dump();
}

}  // namespace jawtap
