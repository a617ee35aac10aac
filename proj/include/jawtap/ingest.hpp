// ingest.hpp
// Aligns the 120 Hz gyro stream and the 8 kHz audio stream into overlapping
// two-second windows. Alignment is by nominal sample index; timestamps are
// only used to detect gaps.

#pragma once

#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "jawtap/diagnostics.hpp"
#include "jawtap/matrix.hpp"
#include "jawtap/recording.hpp"

namespace jawtap {

struct IngestConfig {
    double imu_rate_hz = 120.0;
    double audio_rate_hz = 8000.0;
    double window_seconds = 2.0;
    double hop_seconds = 0.05;
    // A gap longer than this many nominal gyro periods restarts alignment.
    double gap_periods = 3.0;

    std::size_t imu_window_rows() const;
    std::size_t audio_window_rows() const;
    std::size_t imu_hop_rows() const;
    std::size_t audio_hop_rows() const;
};

struct Window {
    double t_start = 0.0;
    GyroMatrix imu;   // imu_window_rows x 6
    PcmMatrix audio;  // audio_window_rows x 2
};

// Single producer (push_*) and single consumer (next_window); internally locked.
// Buffered data is only dropped after the window that covered it was emitted.
class StreamBuffer {
public:
    explicit StreamBuffer(IngestConfig cfg = {});

    // Throws OutOfOrderSample when frame.t does not increase.
    void push_imu(const ImuFrame& frame);
    void push_audio(const AudioFrame& frame);
    // Consecutive samples starting at t_first, spaced 1 / audio_rate_hz.
    void push_audio(double t_first, std::span<const std::int16_t> left, std::span<const std::int16_t> right);

    // Earliest complete, not yet emitted window; nullopt when more data is needed.
    std::optional<Window> next_window();

    std::vector<Diagnostic> take_diagnostics();
    const IngestConfig& config() const { return cfg_; }
    // Start time of the last emitted window, if any.
    std::optional<double> watermark() const;

private:
    void restart_epoch(double t0);
    void sync_audio();

    IngestConfig cfg_;
    mutable std::mutex mu_;

    std::deque<ImuFrame> imu_;
    std::deque<AudioFrame> audio_;
    std::size_t imu_base_ = 0;    // epoch index of imu_.front()
    std::size_t audio_base_ = 0;  // epoch index of audio_.front()
    std::size_t next_window_ = 0;
    bool epoch_started_ = false;
    bool audio_synced_ = false;
    double epoch_t0_ = 0.0;

    std::optional<double> last_imu_t_;
    std::optional<double> last_audio_t_;
    std::optional<double> watermark_;
    std::vector<Diagnostic> diagnostics_;
};

// Feeds a whole recording through a StreamBuffer and collects every window.
std::vector<Window> windows_of(const Recording& rec, const IngestConfig& cfg = {});

}  // namespace jawtap
