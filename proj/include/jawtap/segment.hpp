// segment.hpp
// Energy gating and event-region extraction. A window passes when its audio
// energy and its gyro y-axis peak both exceed their thresholds; the detector
// then waits until the gesture sits in the middle of a window and crops a
// 180-row (1.5 s) region around the smoothed-envelope center.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "jawtap/diagnostics.hpp"
#include "jawtap/ingest.hpp"
#include "jawtap/matrix.hpp"

namespace jawtap {

inline constexpr std::size_t kSegmentHalfRows = 90;
inline constexpr std::size_t kSegmentRows = 2 * kSegmentHalfRows;

struct GateConfig {
    // Unset thresholds are calibrated from the leading noise floor of the stream.
    std::optional<double> audio_energy_threshold;
    std::optional<double> gyro_y_threshold;  // deg/s
    std::size_t smoothing_width = 15;        // odd, samples, centered moving average
    // The center is the mean position of the envelope peaks reaching peak_ratio of the
    // maximum, at most one per smoothing width, chained to it by gaps of at most
    // peak_chain_gap seconds.
    double peak_ratio = 0.6;
    double peak_chain_gap = 0.4;
    double refractory = 0.75;                // seconds after an emitted center

    double calibration_seconds = 3.0;
    double audio_floor_factor = 8.0;
    double gyro_floor_factor = 5.0;
    double gyro_min_threshold = 15.0;

    void validate() const;
};

struct EventSegment {
    double t_center = 0.0;
    GyroMatrix imu;   // 180 x 6, row 90 is the center
    PcmMatrix audio;  // 12000 x 2, same time span
    double audio_energy = 0.0;
    double gyro_peak = 0.0;

    friend bool operator==(const EventSegment&, const EventSegment&) = default;
};

// Mean of squared samples over both channels, full scale (32768) = 1.
double audio_energy(const PcmMatrix& audio);
double audio_energy(const Window& w);

// Largest |y| over both ears.
double gyro_peak(const GyroMatrix& imu);
double gyro_peak(const Window& w);

// Moving average of |y_left| + |y_right|, zero padded at the edges.
std::vector<double> smoothed_envelope(const GyroMatrix& imu, std::size_t smoothing_width);

// Mean row of the dominant peak group around the envelope maximum (a single
// tap gives its apex, a double or triple the middle of its taps).
std::size_t envelope_center(std::span<const double> env, const GateConfig& cfg, double imu_rate_hz = 120.0);
std::size_t find_center(const GyroMatrix& imu, const GateConfig& cfg, double imu_rate_hz = 120.0);

// Crops rows [c - 90, c + 90) around the envelope center and the co-located audio.
// Throws TruncatedEvent when the region does not fit inside the window.
EventSegment center_and_crop(const Window& w, const GateConfig& cfg, const IngestConfig& ingest = {});
EventSegment crop_at(const Window& w, std::size_t center_row, const IngestConfig& ingest = {});

struct GateThresholds {
    double audio_energy = 0.0;
    double gyro_y = 0.0;
};

// Stateful, single-threaded detector fed with windows in hop order.
class EventDetector {
public:
    explicit EventDetector(GateConfig cfg = {}, IngestConfig ingest = {});

    std::optional<EventSegment> push(const Window& w);
    // Flushes a gesture still waiting to be centered when the stream ends.
    std::optional<EventSegment> finish();

    std::vector<Diagnostic> take_diagnostics();
    std::optional<GateThresholds> thresholds() const { return thresholds_; }

private:
    void calibrate(const Window& w);
    std::vector<double> masked_envelope(const Window& w, double& peak) const;
    std::optional<EventSegment> emit(const Window& w, std::size_t center_row, double e, double g);

    GateConfig cfg_;
    IngestConfig ingest_;
    std::vector<double> kernel_;
    std::optional<GateThresholds> thresholds_;

    std::optional<double> stream_t0_;
    std::vector<double> floor_energies_;
    double floor_gyro_ = 0.0;

    std::optional<double> last_center_;
    std::optional<Window> pending_;
    std::vector<Diagnostic> diagnostics_;
};

// Convenience: runs a detector over a window sequence.
std::vector<EventSegment> detect_events(std::span<const Window> windows, const GateConfig& cfg = {},
                                        const IngestConfig& ingest = {},
                                        std::vector<Diagnostic>* diagnostics = nullptr);

}  // namespace jawtap
