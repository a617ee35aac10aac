// synth.hpp
// Parametric generator of labeled gyro + contact-mic recordings. Every
// waveform constant here is a calibration choice, not a measurement.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "jawtap/gesture.hpp"
#include "jawtap/matrix.hpp"
#include "jawtap/recording.hpp"

namespace jawtap {

// Gains on (gx_l, gy_l, gz_l, gx_r, gy_r, gz_r) for one tap at unit amplitude.
using AxisProfile = std::array<double, 6>;

struct GestureTemplateParams {
    double tap_amplitude = 60.0;  // deg/s, y-axis peak of a unit-gain tap
    double tap_width = 0.08;      // s, pulse support; sigma = width / 4
    double inter_tap_gap = 0.25;  // s, tap to tap
    double release_amplitude_ratio = 0.4;
    double release_delay = 0.35;  // s, last tap to release for non-hold manners
    // Each lobe is followed by an opposite rebound lobe.
    double rebound_ratio = 0.4;
    double rebound_delay = 0.04;
    std::array<double, 2> hold_duration_range{2.0, 4.0};

    double amplitude_jitter = 0.2;  // whole gesture, uniform +-
    double tap_jitter = 0.05;       // per pulse, uniform +-
    double timing_jitter = 0.1;     // fraction of gap / delay, uniform +-

    // Left ear positive and right ear negative for Left, mirrored for Right.
    std::array<AxisProfile, 4> place_profiles{{
        {0.10, 0.70, 0.55, 0.10, 0.70, 0.55},      // front
        {0.10, 1.00, -0.45, 0.10, 1.00, -0.45},    // back
        {0.20, 1.00, 0.15, 0.20, -1.00, -0.15},    // left
        {-0.20, -1.00, -0.15, -0.20, 1.00, 0.15},  // right
    }};

    double audio_amplitude = 1800.0;  // LSB, damped tone of the contacting side
    double audio_frequency = 250.0;   // Hz
    double audio_decay = 0.015;       // s
    double audio_far_side = 0.6;      // gain of the ear away from the contact
    double audio_center_side = 0.8;   // front/back gain on both ears
    double release_audio_ratio = 0.12;

    double gyro_noise = 0.5;         // deg/s rms per axis
    double audio_noise_floor = 12.0;  // LSB rms, pink

    void validate() const;
};

struct NoiseParams {
    // Talking
    std::array<double, 2> pitch_range{120.0, 220.0};  // Hz
    double speech_level = 400.0;                       // LSB rms while voiced
    double syllable_rate = 4.0;                        // Hz
    double talk_gyro = 1.5;                            // deg/s
    // Walking
    double step_rate = 2.0;  // Hz
    double step_gyro = 28.0;  // deg/s
    double step_width = 0.07;  // s, sigma
    double thud_amplitude = 600.0;
    // Eating
    std::array<double, 2> chew_interval{0.5, 0.9};  // s
    double chew_gyro = 20.0;
    double chew_width = 0.09;  // s, sigma
    double crunch_amplitude = 500.0;

    double gyro_noise = 0.5;
    double audio_noise_floor = 12.0;

    void validate() const;
};

struct SynthClip {
    GyroMatrix imu;   // rows at k / 120 s from the clip start
    PcmMatrix audio;  // rows at k / 8000 s from the clip start
    double true_center = 0.0;  // mean of the main tap times
    std::vector<double> tap_times;
    std::optional<double> release_time;
    std::optional<double> hold_duration;  // tap to release, holds only
};

struct SynthOptions {
    // For holds: leave the release out entirely.
    bool suppress_release = false;
    // Forces the hold duration instead of drawing it from the range.
    std::optional<double> hold_duration;
};

SynthClip synth_gesture(GestureLabel label, const GestureTemplateParams& params, std::uint64_t seed,
                        const SynthOptions& options = {});
SynthClip synth_noise(NoiseKind kind, double duration, std::uint64_t seed, const NoiseParams& params = {});

struct DatasetSpec {
    std::array<std::size_t, kLabelCount> gesture_counts{};
    std::array<std::size_t, 4> noise_counts{};  // indexed like kNoiseKinds
    double noise_clip_seconds = 4.0;
    double lead_in = 4.0;   // static lead-in for threshold calibration
    double spacing = 1.5;   // silence between consecutive clips
    double tail = 2.0;
    bool shuffle = true;
    bool suppress_hold_release = false;
    GestureTemplateParams gesture;
    NoiseParams noise;

    static DatasetSpec per_label(std::size_t count);
    std::size_t total_gestures() const;
    std::size_t total_noise() const;
    void validate() const;
};

// {"per_label": n} or {"gestures": {"left_single": n, ...}}, "noise": {"noise_talking": n, ...},
// plus optional scalar overrides and "gesture_params" / "noise_params" objects.
DatasetSpec dataset_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DatasetSpec& spec);

// Gesture annotations span [c - 0.75, c + 0.75]; holds carry hold_duration unless the
// release was suppressed. Noise annotations span their clip.
Recording synth_dataset(const DatasetSpec& spec, std::uint64_t seed);

}  // namespace jawtap
