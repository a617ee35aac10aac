// session.hpp
// Turns classified segments into gesture events: immediate events for taps,
// tap-to-release timing for holds, hold timeouts, and an activation-only mode
// that reports nothing but confident back-triple gestures.

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jawtap/diagnostics.hpp"
#include "jawtap/dtw_knn.hpp"
#include "jawtap/gesture.hpp"
#include "jawtap/recording.hpp"

namespace jawtap {

enum class SessionMode { FullVocabulary, ActivationOnly };

struct ClassifiedSegment {
    GestureLabel label;
    double nn_distance = 0.0;
    double t_center = 0.0;
};

struct GestureEvent {
    GestureLabel label;
    double t_center = 0.0;
    std::optional<double> hold_duration;  // present iff label is a hold
    double nn_distance = 0.0;

    friend bool operator==(const GestureEvent&, const GestureEvent&) = default;
};

// {"label", "t_center", "hold_duration"?, "nn_distance"}
std::string to_json_line(const GestureEvent& e);

struct SessionConfig {
    SessionMode mode = SessionMode::FullVocabulary;
    double hold_timeout = 5.0;  // seconds past the expected hold end
    std::optional<double> activation_threshold;
};

struct SessionOutput {
    std::vector<GestureEvent> events;
    std::vector<Diagnostic> diagnostics;
};

class Session {
public:
    explicit Session(SessionConfig cfg = {});

    // Inputs must arrive in t_center order; throws OutOfOrderInput.
    SessionOutput process(const ClassifiedSegment& c);
    // Completes a pending hold.
    SessionOutput release(double t_release);
    // An external timer says the hold should end at t; the timeout runs from there.
    void expect_hold_end(double t);
    // Fires HoldTimeout once the clock passes the pending hold's deadline.
    SessionOutput advance(double t_now);

    // Throws UncalibratedThreshold when no threshold is configured.
    bool activation_detect(const ClassifiedSegment& c) const;

    bool hold_pending() const { return pending_.has_value(); }
    std::optional<double> hold_start() const;
    const SessionConfig& config() const { return cfg_; }

private:
    struct PendingHold {
        GestureLabel label;
        double t_start;
        double nn_distance;
        double deadline;
    };

    SessionConfig cfg_;
    std::optional<PendingHold> pending_;
    std::optional<double> last_t_;
};

struct ReleaseConfig {
    double threshold = 9.0;  // deg/s on |y| of either ear
    double lockout = 0.3;    // seconds after hold onset
};

// Streaming release detector: after the lockout, the first |y| excursion above
// threshold is followed to its maximum, whose time is reported.
class ReleaseDetector {
public:
    explicit ReleaseDetector(ReleaseConfig cfg = {}) : cfg_(cfg) {}

    void arm(double t_onset);
    void disarm();
    bool armed() const { return onset_.has_value(); }
    std::optional<double> feed(const ImuFrame& f);

private:
    ReleaseConfig cfg_;
    std::optional<double> onset_;
    bool in_peak_ = false;
    double peak_value_ = 0.0;
    double peak_t_ = 0.0;
};

std::optional<double> detect_release(std::span<const ImuFrame> frames, double t_onset, const ReleaseConfig& cfg = {});

// factor x the largest leave-one-out nearest-neighbour distance among the
// back_triple templates. Throws UncalibratedThreshold with fewer than two.
double calibrate_activation_threshold(const KnnModel& model, double factor = 1.2);

}  // namespace jawtap
