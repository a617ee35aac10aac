#include "jawtap/segment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jawtap/error.hpp"

namespace jawtap {

namespace {

constexpr double kFullScale = 32768.0;

std::vector<double> box_kernel(std::size_t width) {
    return std::vector<double>(width, 1.0 / static_cast<double>(width));
}

std::vector<double> convolve_same(const std::vector<double>& x, const std::vector<double>& kernel) {
    const auto n = static_cast<std::ptrdiff_t>(x.size());
    const auto half = static_cast<std::ptrdiff_t>(kernel.size() / 2);
    std::vector<double> out(x.size(), 0.0);
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::ptrdiff_t k = -half; k <= half; ++k) {
            std::ptrdiff_t j = i + k;
            if (j >= 0 && j < n) acc += kernel[static_cast<std::size_t>(k + half)] * x[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

std::vector<double> abs_y_sum(const GyroMatrix& imu) {
    std::vector<double> s(imu.rows());
    for (std::size_t r = 0; r < imu.rows(); ++r) s[r] = std::abs(imu(r, kLeftY)) + std::abs(imu(r, kRightY));
    return s;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

void GateConfig::validate() const {
    if (smoothing_width == 0 || smoothing_width % 2 == 0)
        throw Error(ErrorCode::InvalidArgument, "smoothing_width must be odd");
    if (audio_energy_threshold && !(*audio_energy_threshold > 0.0))
        throw Error(ErrorCode::InvalidArgument, "audio_energy_threshold must be positive");
    if (gyro_y_threshold && !(*gyro_y_threshold > 0.0))
        throw Error(ErrorCode::InvalidArgument, "gyro_y_threshold must be positive");
    if (!(peak_ratio > 0.0 && peak_ratio <= 1.0) || !(peak_chain_gap >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "peak_ratio must lie in (0, 1] and peak_chain_gap be non-negative");
    if (!(refractory > 0.0) || !(calibration_seconds > 0.0) || !(audio_floor_factor > 0.0) ||
        !(gyro_floor_factor > 0.0) || !(gyro_min_threshold > 0.0))
        throw Error(ErrorCode::InvalidArgument, "gate parameters must be positive");
}

double audio_energy(const PcmMatrix& audio) {
    if (audio.empty()) return 0.0;
    double acc = 0.0;
    for (std::int16_t s : audio.data()) {
        double v = static_cast<double>(s) / kFullScale;
        acc += v * v;
    }
    return acc / static_cast<double>(audio.data().size());
}

double audio_energy(const Window& w) { return audio_energy(w.audio); }

double gyro_peak(const GyroMatrix& imu) {
    double peak = 0.0;
    for (std::size_t r = 0; r < imu.rows(); ++r)
        peak = std::max({peak, std::abs(imu(r, kLeftY)), std::abs(imu(r, kRightY))});
    return peak;
}

double gyro_peak(const Window& w) { return gyro_peak(w.imu); }

std::vector<double> smoothed_envelope(const GyroMatrix& imu, std::size_t smoothing_width) {
    return convolve_same(abs_y_sum(imu), box_kernel(smoothing_width));
}

std::size_t envelope_center(std::span<const double> env, const GateConfig& cfg, double imu_rate_hz) {
    if (env.empty()) return 0;
    const std::size_t top = static_cast<std::size_t>(std::max_element(env.begin(), env.end()) - env.begin());
    const double floor = cfg.peak_ratio * env[top];
    // Local maxima above the floor, tallest first, one per smoothing width.
    std::vector<std::size_t> candidates;
    for (std::size_t r = 0; r < env.size(); ++r) {
        const bool rising = r == 0 || env[r] > env[r - 1];
        const bool falling = r + 1 == env.size() || env[r] >= env[r + 1];
        if (rising && falling && env[r] >= floor) candidates.push_back(r);
    }
    std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) { return env[a] > env[b]; });
    std::vector<std::size_t> peaks{top};
    for (std::size_t r : candidates) {
        const bool clear = std::all_of(peaks.begin(), peaks.end(), [&](std::size_t p) {
            return (r > p ? r - p : p - r) > cfg.smoothing_width;
        });
        if (clear) peaks.push_back(r);
    }
    std::sort(peaks.begin(), peaks.end());
    const auto gap = static_cast<std::size_t>(std::llround(cfg.peak_chain_gap * imu_rate_hz));
    const auto it = std::find(peaks.begin(), peaks.end(), top);
    auto lo = it, hi = it;
    while (lo != peaks.begin() && *lo - *(lo - 1) <= gap) --lo;
    while (hi + 1 != peaks.end() && *(hi + 1) - *hi <= gap) ++hi;
    double sum = 0.0;
    for (auto p = lo; p <= hi; ++p) sum += static_cast<double>(*p);
    return static_cast<std::size_t>(std::llround(sum / static_cast<double>(hi - lo + 1)));
}

std::size_t find_center(const GyroMatrix& imu, const GateConfig& cfg, double imu_rate_hz) {
    return envelope_center(smoothed_envelope(imu, cfg.smoothing_width), cfg, imu_rate_hz);
}

EventSegment crop_at(const Window& w, std::size_t center_row, const IngestConfig& ingest) {
    if (center_row < kSegmentHalfRows || center_row + kSegmentHalfRows > w.imu.rows())
        throw Error(ErrorCode::TruncatedEvent, "center row " + std::to_string(center_row) + " of " +
                                                   std::to_string(w.imu.rows()));
    const double ratio = ingest.audio_rate_hz / ingest.imu_rate_hz;
    const auto audio_first =
        static_cast<std::size_t>(std::llround(static_cast<double>(center_row - kSegmentHalfRows) * ratio));
    const auto audio_rows = static_cast<std::size_t>(std::llround(static_cast<double>(kSegmentRows) * ratio));
    if (audio_first + audio_rows > w.audio.rows())
        throw Error(ErrorCode::TruncatedEvent, "audio slice exceeds window");

    EventSegment seg;
    seg.t_center = w.t_start + static_cast<double>(center_row) / ingest.imu_rate_hz;
    seg.imu = w.imu.slice_rows(center_row - kSegmentHalfRows, kSegmentRows);
    seg.audio = w.audio.slice_rows(audio_first, audio_rows);
    seg.audio_energy = audio_energy(w);
    seg.gyro_peak = gyro_peak(w);
    return seg;
}

EventSegment center_and_crop(const Window& w, const GateConfig& cfg, const IngestConfig& ingest) {
    return crop_at(w, find_center(w.imu, cfg, ingest.imu_rate_hz), ingest);
}

EventDetector::EventDetector(GateConfig cfg, IngestConfig ingest)
    : cfg_(cfg), ingest_(ingest), kernel_(box_kernel(cfg.smoothing_width)) {
    cfg_.validate();
    if (cfg_.audio_energy_threshold && cfg_.gyro_y_threshold)
        thresholds_ = GateThresholds{*cfg_.audio_energy_threshold, *cfg_.gyro_y_threshold};
}

// Noise floor: median window energy and gyro |y| maximum over windows lying
// entirely inside the first calibration_seconds of the stream.
void EventDetector::calibrate(const Window& w) {
    if (!stream_t0_) stream_t0_ = w.t_start;
    const double end = w.t_start + ingest_.window_seconds;
    if (end <= *stream_t0_ + cfg_.calibration_seconds + 1e-9) {
        floor_energies_.push_back(audio_energy(w));
        floor_gyro_ = std::max(floor_gyro_, gyro_peak(w));
        return;
    }
    GateThresholds t;
    t.audio_energy = cfg_.audio_energy_threshold.value_or(
        std::max(cfg_.audio_floor_factor * median(floor_energies_), 1e-12));
    t.gyro_y = cfg_.gyro_y_threshold.value_or(
        std::max(cfg_.gyro_min_threshold, cfg_.gyro_floor_factor * floor_gyro_));
    thresholds_ = t;
}

std::optional<EventSegment> EventDetector::push(const Window& w) {
    if (!thresholds_) {
        calibrate(w);
        if (!thresholds_) return std::nullopt;
    }

    const double energy = audio_energy(w);
    if (!(energy > thresholds_->audio_energy)) {
        pending_.reset();
        return std::nullopt;
    }

    double peak = 0.0;
    const std::vector<double> env = masked_envelope(w, peak);
    if (!(peak > thresholds_->gyro_y)) {
        pending_.reset();
        return std::nullopt;
    }

    const std::size_t center = envelope_center(env, cfg_, ingest_.imu_rate_hz);
    const std::size_t middle = w.imu.rows() / 2;
    if (center > middle) {
        pending_ = w;
        return std::nullopt;
    }
    pending_.reset();
    if (center < kSegmentHalfRows) {
        double t = w.t_start + static_cast<double>(center) / ingest_.imu_rate_hz;
        diagnostics_.push_back({DiagnosticKind::TruncatedEvent, t, "event seen after its center passed"});
        last_center_ = t;
        return std::nullopt;
    }
    return emit(w, center, energy, peak);
}

// Smoothed envelope with rows inside the refractory span of the last emitted
// event zeroed; peak gets the gyro |y| maximum over the remaining rows.
std::vector<double> EventDetector::masked_envelope(const Window& w, double& peak) const {
    std::vector<double> env = abs_y_sum(w.imu);
    peak = 0.0;
    for (std::size_t r = 0; r < env.size(); ++r) {
        const double t = w.t_start + static_cast<double>(r) / ingest_.imu_rate_hz;
        if (last_center_ && t < *last_center_ + cfg_.refractory) env[r] = 0.0;
        else peak = std::max({peak, std::abs(w.imu(r, kLeftY)), std::abs(w.imu(r, kRightY))});
    }
    return convolve_same(env, kernel_);
}

std::optional<EventSegment> EventDetector::emit(const Window& w, std::size_t center_row, double e, double g) {
    EventSegment seg = crop_at(w, center_row, ingest_);
    seg.audio_energy = e;
    seg.gyro_peak = g;
    last_center_ = seg.t_center;
    return seg;
}

std::optional<EventSegment> EventDetector::finish() {
    if (!pending_) return std::nullopt;
    Window w = std::move(*pending_);
    pending_.reset();

    double peak = 0.0;
    const std::size_t center = envelope_center(masked_envelope(w, peak), cfg_, ingest_.imu_rate_hz);
    if (center < kSegmentHalfRows || center + kSegmentHalfRows > w.imu.rows()) {
        diagnostics_.push_back({DiagnosticKind::TruncatedEvent,
                                w.t_start + static_cast<double>(center) / ingest_.imu_rate_hz,
                                "stream ended before the event was centered"});
        return std::nullopt;
    }
    return emit(w, center, audio_energy(w), peak);
}

std::vector<Diagnostic> EventDetector::take_diagnostics() { return std::exchange(diagnostics_, {}); }

std::vector<EventSegment> detect_events(std::span<const Window> windows, const GateConfig& cfg,
                                        const IngestConfig& ingest, std::vector<Diagnostic>* diagnostics) {
    EventDetector det(cfg, ingest);
    std::vector<EventSegment> out;
    for (const auto& w : windows)
        if (auto seg = det.push(w)) out.push_back(std::move(*seg));
    if (auto seg = det.finish()) out.push_back(std::move(*seg));
    if (diagnostics) {
        auto d = det.take_diagnostics();
        diagnostics->insert(diagnostics->end(), d.begin(), d.end());
    }
    return out;
}

}  // namespace jawtap
