// recording.hpp
// Labeled multi-rate capture: dual-ear gyro at 120 Hz, dual contact-mic PCM at 8 kHz,
// and a ground-truth annotation track. Timestamps are seconds from recording start.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "jawtap/gesture.hpp"

namespace jawtap {

struct ImuFrame {
    double t = 0.0;
    std::array<double, 3> gyro_left{};   // deg/s, x y z
    std::array<double, 3> gyro_right{};  // deg/s, x y z

    friend bool operator==(const ImuFrame&, const ImuFrame&) = default;
};

struct AudioFrame {
    double t = 0.0;
    std::int16_t left = 0;
    std::int16_t right = 0;

    friend bool operator==(const AudioFrame&, const AudioFrame&) = default;
};

struct Annotation {
    AnnotationLabel label;
    double t_start = 0.0;
    double t_end = 0.0;
    // Only for hold gestures: time from tap to release, when known.
    std::optional<double> hold_duration;

    double center() const { return 0.5 * (t_start + t_end); }
    friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct RecordingMeta {
    double imu_rate_hz = 120.0;
    double audio_rate_hz = 8000.0;
    std::string subject = "synthetic";
    std::string session = "0";
    std::string gyro_units = "deg/s";

    friend bool operator==(const RecordingMeta&, const RecordingMeta&) = default;
};

// Audio is stored column-wise; sample k of either channel sits at t = k / audio_rate_hz.
struct Recording {
    RecordingMeta meta;
    std::vector<ImuFrame> imu;
    std::vector<std::int16_t> audio_left;
    std::vector<std::int16_t> audio_right;
    std::vector<Annotation> annotations;

    std::size_t audio_size() const { return audio_left.size(); }
    AudioFrame audio_frame(std::size_t k) const {
        return {static_cast<double>(k) / meta.audio_rate_hz, audio_left[k], audio_right[k]};
    }
    double imu_duration() const { return static_cast<double>(imu.size()) / meta.imu_rate_hz; }
    double audio_duration() const { return static_cast<double>(audio_size()) / meta.audio_rate_hz; }
    double duration() const { return imu_duration(); }

    friend bool operator==(const Recording&, const Recording&) = default;
};

// Throws NonMonotonicTimestamps, RateMismatch or InvariantViolation.
void validate(const Recording& rec);

// Directory layout: meta.json, imu.csv, audio_l.pcm, audio_r.pcm, annotations.jsonl.
Recording load_recording(const std::filesystem::path& dir);
// Throws InvariantViolation for an invalid recording, IoFailure on write errors.
void save_recording(const Recording& rec, const std::filesystem::path& dir);

}  // namespace jawtap
