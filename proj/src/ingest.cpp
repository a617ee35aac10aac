#include "jawtap/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "jawtap/error.hpp"

namespace jawtap {

namespace {

std::size_t to_rows(double seconds, double rate) {
    return static_cast<std::size_t>(std::llround(seconds * rate));
}

}  // namespace

std::size_t IngestConfig::imu_window_rows() const { return to_rows(window_seconds, imu_rate_hz); }
std::size_t IngestConfig::audio_window_rows() const { return to_rows(window_seconds, audio_rate_hz); }
std::size_t IngestConfig::imu_hop_rows() const { return to_rows(hop_seconds, imu_rate_hz); }
std::size_t IngestConfig::audio_hop_rows() const { return to_rows(hop_seconds, audio_rate_hz); }

StreamBuffer::StreamBuffer(IngestConfig cfg) : cfg_(cfg) {
    if (cfg_.imu_hop_rows() == 0 || cfg_.audio_hop_rows() == 0 || cfg_.imu_window_rows() == 0)
        throw Error(ErrorCode::InvalidArgument, "window and hop must cover at least one sample");
}

void StreamBuffer::push_imu(const ImuFrame& frame) {
    std::lock_guard lock(mu_);
    if (last_imu_t_ && !(frame.t > *last_imu_t_))
        throw Error(ErrorCode::OutOfOrderSample, "imu t=" + std::to_string(frame.t));
    if (!epoch_started_) {
        restart_epoch(frame.t);
    } else if (frame.t - *last_imu_t_ > cfg_.gap_periods / cfg_.imu_rate_hz) {
        diagnostics_.push_back({DiagnosticKind::GapDetected, *last_imu_t_,
                                "imu gap of " + std::to_string(frame.t - *last_imu_t_) + " s"});
        restart_epoch(frame.t);
    }
    imu_.push_back(frame);
    last_imu_t_ = frame.t;
}

void StreamBuffer::push_audio(const AudioFrame& frame) {
    std::lock_guard lock(mu_);
    if (last_audio_t_ && !(frame.t > *last_audio_t_))
        throw Error(ErrorCode::OutOfOrderSample, "audio t=" + std::to_string(frame.t));
    audio_.push_back(frame);
    last_audio_t_ = frame.t;
}

void StreamBuffer::push_audio(double t_first, std::span<const std::int16_t> left,
                              std::span<const std::int16_t> right) {
    if (left.size() != right.size()) throw Error(ErrorCode::ShapeMismatch, "audio channel lengths differ");
    std::lock_guard lock(mu_);
    if (left.empty()) return;
    if (last_audio_t_ && !(t_first > *last_audio_t_))
        throw Error(ErrorCode::OutOfOrderSample, "audio t=" + std::to_string(t_first));
    const double dt = 1.0 / cfg_.audio_rate_hz;
    for (std::size_t i = 0; i < left.size(); ++i)
        audio_.push_back({t_first + static_cast<double>(i) * dt, left[i], right[i]});
    last_audio_t_ = audio_.back().t;
}

void StreamBuffer::restart_epoch(double t0) {
    imu_.clear();
    imu_base_ = 0;
    audio_base_ = 0;
    next_window_ = 0;
    epoch_started_ = true;
    audio_synced_ = false;
    epoch_t0_ = t0;
}

// Audio sample 0 of an epoch is the first sample at or after the epoch's first gyro frame.
void StreamBuffer::sync_audio() {
    if (audio_synced_ || !epoch_started_) return;
    const double cutoff = epoch_t0_ - 0.5 / cfg_.audio_rate_hz;
    while (!audio_.empty() && audio_.front().t < cutoff) audio_.pop_front();
    if (!audio_.empty()) {
        audio_synced_ = true;
        audio_base_ = 0;
    }
}

std::optional<Window> StreamBuffer::next_window() {
    std::lock_guard lock(mu_);
    sync_audio();
    if (!audio_synced_) return std::nullopt;

    const std::size_t imu_rows = cfg_.imu_window_rows();
    const std::size_t audio_rows = cfg_.audio_window_rows();
    const std::size_t imu_first = next_window_ * cfg_.imu_hop_rows();
    const std::size_t audio_first = next_window_ * cfg_.audio_hop_rows();
    if (imu_first + imu_rows > imu_base_ + imu_.size()) return std::nullopt;
    if (audio_first + audio_rows > audio_base_ + audio_.size()) return std::nullopt;

    Window w;
    w.t_start = epoch_t0_ + static_cast<double>(imu_first) / cfg_.imu_rate_hz;
    w.imu = GyroMatrix(imu_rows, kGyroColumns);
    for (std::size_t r = 0; r < imu_rows; ++r) {
        const ImuFrame& f = imu_[imu_first - imu_base_ + r];
        for (std::size_t c = 0; c < 3; ++c) {
            w.imu(r, c) = f.gyro_left[c];
            w.imu(r, c + 3) = f.gyro_right[c];
        }
    }
    w.audio = PcmMatrix(audio_rows, 2);
    for (std::size_t r = 0; r < audio_rows; ++r) {
        const AudioFrame& a = audio_[audio_first - audio_base_ + r];
        w.audio(r, 0) = a.left;
        w.audio(r, 1) = a.right;
    }

    ++next_window_;
    watermark_ = w.t_start;
    const std::size_t imu_keep = next_window_ * cfg_.imu_hop_rows();
    while (imu_base_ < imu_keep && !imu_.empty()) imu_.pop_front(), ++imu_base_;
    const std::size_t audio_keep = next_window_ * cfg_.audio_hop_rows();
    while (audio_base_ < audio_keep && !audio_.empty()) audio_.pop_front(), ++audio_base_;
    return w;
}

std::vector<Diagnostic> StreamBuffer::take_diagnostics() {
    std::lock_guard lock(mu_);
    return std::exchange(diagnostics_, {});
}

std::optional<double> StreamBuffer::watermark() const {
    std::lock_guard lock(mu_);
    return watermark_;
}

std::vector<Window> windows_of(const Recording& rec, const IngestConfig& cfg) {
    StreamBuffer buf(cfg);
    std::vector<Window> out;
    std::span<const std::int16_t> left(rec.audio_left), right(rec.audio_right);
    std::size_t audio_pushed = 0;
    auto push_audio_until = [&](std::size_t end) {
        end = std::min(end, left.size());
        if (end <= audio_pushed) return;
        buf.push_audio(static_cast<double>(audio_pushed) / rec.meta.audio_rate_hz,
                       left.subspan(audio_pushed, end - audio_pushed),
                       right.subspan(audio_pushed, end - audio_pushed));
        audio_pushed = end;
    };
    const double ratio = rec.meta.audio_rate_hz / rec.meta.imu_rate_hz;
    for (std::size_t i = 0; i < rec.imu.size(); ++i) {
        push_audio_until(static_cast<std::size_t>(std::llround(static_cast<double>(i + 1) * ratio)));
        buf.push_imu(rec.imu[i]);
        while (auto w = buf.next_window()) out.push_back(std::move(*w));
    }
    push_audio_until(left.size());
    while (auto w = buf.next_window()) out.push_back(std::move(*w));
    return out;
}

}  // namespace jawtap
