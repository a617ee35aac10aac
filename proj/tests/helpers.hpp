// helpers.hpp
// Small fixtures shared by the unit tests.

#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "jawtap/matrix.hpp"
#include "jawtap/recording.hpp"
#include "jawtap/segment.hpp"
#include "jawtap/synth.hpp"

namespace testutil {

inline std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("jawtap_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

// Quiet recording: small gyro noise, near-silent audio.
inline jawtap::Recording quiet_recording(double seconds, std::uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 0.5);
    std::uniform_int_distribution<int> a(-3, 3);
    jawtap::Recording rec;
    const auto n_imu = static_cast<std::size_t>(std::llround(seconds * 120.0));
    for (std::size_t k = 0; k < n_imu; ++k) {
        jawtap::ImuFrame f;
        f.t = static_cast<double>(k) / 120.0;
        for (int i = 0; i < 3; ++i) f.gyro_left[i] = g(rng), f.gyro_right[i] = g(rng);
        rec.imu.push_back(f);
    }
    const auto n_audio = static_cast<std::size_t>(std::llround(seconds * 8000.0));
    for (std::size_t k = 0; k < n_audio; ++k) {
        rec.audio_left.push_back(static_cast<std::int16_t>(a(rng)));
        rec.audio_right.push_back(static_cast<std::int16_t>(a(rng)));
    }
    return rec;
}

inline jawtap::GyroMatrix random_gyro(std::size_t rows, std::mt19937_64& rng, double scale = 10.0) {
    std::normal_distribution<double> g(0.0, scale);
    jawtap::GyroMatrix m(rows, jawtap::kGyroColumns);
    for (double& v : m.data()) v = g(rng);
    return m;
}

inline jawtap::PcmMatrix random_pcm(std::size_t rows, std::mt19937_64& rng, int amplitude = 2000) {
    std::uniform_int_distribution<int> d(-amplitude, amplitude);
    jawtap::PcmMatrix m(rows, 2);
    for (auto& v : m.data()) v = static_cast<std::int16_t>(d(rng));
    return m;
}

// 1.5 s segment of a synthetic clip centered on the given gyro row.
inline jawtap::EventSegment segment_of(const jawtap::SynthClip& clip, std::size_t center_row) {
    jawtap::EventSegment seg;
    seg.t_center = static_cast<double>(center_row) / 120.0;
    seg.imu = clip.imu.slice_rows(center_row - 90, 180);
    seg.audio = clip.audio.slice_rows((center_row - 90) * 200 / 3, 12000);
    return seg;
}

inline jawtap::EventSegment segment_of(const jawtap::SynthClip& clip) {
    return segment_of(clip, static_cast<std::size_t>(std::llround(clip.true_center * 120.0)));
}

inline bool close_rel(double a, double b, double rel, double abs_floor = 1e-12) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs_floor;
}

}  // namespace testutil
