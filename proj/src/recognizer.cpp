#include "jawtap/recognizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include "jawtap/error.hpp"

namespace jawtap {

namespace {

constexpr double kHistorySeconds = 4.0;

GateConfig gate_for(const GestureModel& model, GateConfig gate) {
    if (model.audio_energy_threshold) gate.audio_energy_threshold = model.audio_energy_threshold;
    if (model.gyro_y_threshold) gate.gyro_y_threshold = model.gyro_y_threshold;
    return gate;
}

template <typename PushAudio, typename PushImu>
void interleave(const Recording& rec, PushAudio&& push_audio, PushImu&& push_imu) {
    std::span<const std::int16_t> left(rec.audio_left), right(rec.audio_right);
    std::size_t pushed = 0;
    auto until = [&](std::size_t end) {
        end = std::min(end, left.size());
        if (end <= pushed) return;
        push_audio(static_cast<double>(pushed) / rec.meta.audio_rate_hz, left.subspan(pushed, end - pushed),
                   right.subspan(pushed, end - pushed));
        pushed = end;
    };
    const double ratio = rec.meta.audio_rate_hz / rec.meta.imu_rate_hz;
    for (std::size_t i = 0; i < rec.imu.size(); ++i) {
        until(static_cast<std::size_t>(std::llround(static_cast<double>(i + 1) * ratio)));
        push_imu(rec.imu[i]);
    }
    until(left.size());
}

}  // namespace

Recognizer::Recognizer(const GestureModel& model, RecognizerConfig cfg)
    : model_(model),
      cfg_(cfg),
      buffer_(cfg.ingest),
      detector_(gate_for(model, cfg.gate), cfg.ingest),
      session_(SessionConfig{cfg.mode, cfg.hold_timeout, model.activation_threshold}) {
    if (cfg_.mode == SessionMode::ActivationOnly && !model.activation_threshold)
        throw Error(ErrorCode::UncalibratedThreshold, "model has no activation threshold");
}

void Recognizer::push_imu(const ImuFrame& frame) {
    buffer_.push_imu(frame);
    history_.push_back(frame);
    while (!history_.empty() && history_.front().t < frame.t - kHistorySeconds) history_.pop_front();
    on_frame_for_release(frame);
    absorb(session_.advance(frame.t));
    drain_windows();
}

void Recognizer::push_audio(double t_first, std::span<const std::int16_t> left, std::span<const std::int16_t> right) {
    buffer_.push_audio(t_first, left, right);
    drain_windows();
}

void Recognizer::push_audio(const AudioFrame& frame) {
    buffer_.push_audio(frame);
    drain_windows();
}

void Recognizer::finish() {
    drain_windows();
    if (auto seg = detector_.finish()) handle_segment(*seg);
    auto d = detector_.take_diagnostics();
    diagnostics_.insert(diagnostics_.end(), d.begin(), d.end());
}

void Recognizer::drain_windows() {
    while (auto w = buffer_.next_window())
        if (auto seg = detector_.push(*w)) handle_segment(*seg);
    for (auto d : {buffer_.take_diagnostics(), detector_.take_diagnostics()})
        diagnostics_.insert(diagnostics_.end(), d.begin(), d.end());
}

void Recognizer::on_frame_for_release(const ImuFrame& f) {
    if (!release_.armed()) return;
    if (auto t = release_.feed(f)) {
        last_release_ = *t;
        diagnostics_.push_back({DiagnosticKind::ReleaseDetected, *t, ""});
        absorb(session_.release(*t));
    }
}

void Recognizer::absorb(SessionOutput out) {
    events_.insert(events_.end(), out.events.begin(), out.events.end());
    diagnostics_.insert(diagnostics_.end(), out.diagnostics.begin(), out.diagnostics.end());
    if (!session_.hold_pending()) release_.disarm();
}

void Recognizer::handle_segment(const EventSegment& seg) {
    if (last_release_ && std::abs(seg.t_center - *last_release_) <= cfg_.release_guard) return;

    SegmentDecision decision{seg.t_center, {}, std::nullopt};
    decision.gate = gate(model_.svm, feature_vector(seg, model_.svm.mode, cfg_.feature_mask));
    if (decision.gate.cls == GateClass::Noise) {
        diagnostics_.push_back({DiagnosticKind::NoiseRejected, seg.t_center,
                                "margin " + std::to_string(decision.gate.margin)});
        decisions_.push_back(decision);
        return;
    }
    decision.classification = classify(model_.knn, seg.imu);
    decisions_.push_back(decision);

    const bool was_pending = session_.hold_pending();
    absorb(session_.process({decision.classification->label, decision.classification->nn_distance, seg.t_center}));
    if (session_.hold_pending() && (!was_pending || session_.hold_start() == seg.t_center)) {
        const double gyro_threshold = detector_.thresholds() ? detector_.thresholds()->gyro_y : cfg_.gate.gyro_min_threshold;
        release_ = ReleaseDetector({cfg_.release_factor * gyro_threshold, cfg_.release_lockout});
        release_.arm(seg.t_center);
        // The hold is classified about a second after its onset; catch up on buffered frames.
        for (const auto& f : history_) {
            if (!release_.armed()) break;
            on_frame_for_release(f);
        }
    }
}

std::vector<GestureEvent> Recognizer::take_events() { return std::exchange(events_, {}); }
std::vector<Diagnostic> Recognizer::take_diagnostics() { return std::exchange(diagnostics_, {}); }
std::vector<SegmentDecision> Recognizer::take_decisions() { return std::exchange(decisions_, {}); }

ReplayResult replay(const GestureModel& model, const Recording& rec, const RecognizerConfig& cfg, bool realtime) {
    Recognizer rz(model, cfg);
    const auto start = std::chrono::steady_clock::now();
    interleave(
        rec,
        [&](double t0, std::span<const std::int16_t> l, std::span<const std::int16_t> r) { rz.push_audio(t0, l, r); },
        [&](const ImuFrame& f) {
            if (realtime) std::this_thread::sleep_until(start + std::chrono::duration<double>(f.t));
            rz.push_imu(f);
        });
    rz.finish();
    return {rz.take_events(), rz.take_diagnostics(), rz.take_decisions()};
}

std::vector<EventSegment> extract_segments(const Recording& rec, const GateConfig& gate, const IngestConfig& ingest) {
    StreamBuffer buf(ingest);
    EventDetector det(gate, ingest);
    std::vector<EventSegment> out;
    auto drain = [&] {
        while (auto w = buf.next_window())
            if (auto seg = det.push(*w)) out.push_back(std::move(*seg));
    };
    interleave(
        rec,
        [&](double t0, std::span<const std::int16_t> l, std::span<const std::int16_t> r) {
            buf.push_audio(t0, l, r);
            drain();
        },
        [&](const ImuFrame& f) {
            buf.push_imu(f);
            drain();
        });
    drain();
    if (auto seg = det.finish()) out.push_back(std::move(*seg));
    return out;
}

std::optional<EventSegment> crop_recording(const Recording& rec, double t_center) {
    if (rec.imu.empty()) return std::nullopt;
    const double c = std::round((t_center - rec.imu.front().t) * rec.meta.imu_rate_hz);
    if (c < static_cast<double>(kSegmentHalfRows)) return std::nullopt;
    const auto center = static_cast<std::size_t>(c);
    if (center + kSegmentHalfRows > rec.imu.size()) return std::nullopt;
    const double ratio = rec.meta.audio_rate_hz / rec.meta.imu_rate_hz;
    const auto audio_first = static_cast<std::size_t>(std::llround(static_cast<double>(center - kSegmentHalfRows) * ratio));
    const auto audio_rows = static_cast<std::size_t>(std::llround(static_cast<double>(kSegmentRows) * ratio));
    if (audio_first + audio_rows > rec.audio_size()) return std::nullopt;

    EventSegment seg;
    seg.t_center = rec.imu[center].t;
    seg.imu = GyroMatrix(kSegmentRows, kGyroColumns);
    for (std::size_t r = 0; r < kSegmentRows; ++r) {
        const auto& f = rec.imu[center - kSegmentHalfRows + r];
        for (std::size_t k = 0; k < 3; ++k) {
            seg.imu(r, k) = f.gyro_left[k];
            seg.imu(r, k + 3) = f.gyro_right[k];
        }
    }
    seg.audio = PcmMatrix(audio_rows, 2);
    for (std::size_t r = 0; r < audio_rows; ++r) {
        seg.audio(r, 0) = rec.audio_left[audio_first + r];
        seg.audio(r, 1) = rec.audio_right[audio_first + r];
    }
    seg.audio_energy = audio_energy(seg.audio);
    seg.gyro_peak = gyro_peak(seg.imu);
    return seg;
}

TrainingData collect_training_data(const Recording& rec, const TrainConfig& cfg) {
    TrainingData data;
    const auto segments = extract_segments(rec, cfg.gate, cfg.ingest);

    std::vector<const Annotation*> gestures;
    for (const auto& a : rec.annotations)
        if (std::holds_alternative<GestureLabel>(a.label)) gestures.push_back(&a);
    std::vector<bool> used(gestures.size(), false);

    for (const auto& seg : segments) {
        std::ptrdiff_t best = -1;
        double best_gap = cfg.match_window;
        for (std::size_t i = 0; i < gestures.size(); ++i) {
            if (used[i]) continue;
            const double gap = std::abs(gestures[i]->center() - seg.t_center);
            if (gap <= best_gap) best_gap = gap, best = static_cast<std::ptrdiff_t>(i);
        }
        data.features.push_back(feature_vector(seg, cfg.mode, cfg.mask));
        if (best >= 0) {
            used[static_cast<std::size_t>(best)] = true;
            data.templates.push_back({std::get<GestureLabel>(gestures[static_cast<std::size_t>(best)]->label), seg.imu});
            data.classes.push_back(GateClass::Gesture);
        } else {
            data.classes.push_back(GateClass::Noise);
        }
    }

    for (const auto& a : rec.annotations) {
        if (!std::holds_alternative<NoiseKind>(a.label)) continue;
        const double half = 0.5 * static_cast<double>(kSegmentRows) / rec.meta.imu_rate_hz;
        for (double t = a.t_start + half; t + half <= a.t_end + 1e-9; t += cfg.noise_crop_stride) {
            if (auto seg = crop_recording(rec, t)) {
                data.features.push_back(feature_vector(*seg, cfg.mode, cfg.mask));
                data.classes.push_back(GateClass::Noise);
            }
        }
    }

    if (cfg.background_crop_stride > 0.0) {
        const double half = 0.5 * static_cast<double>(kSegmentRows) / rec.meta.imu_rate_hz;
        auto clear = [&](double t) {
            return std::none_of(rec.annotations.begin(), rec.annotations.end(), [&](const Annotation& a) {
                return t + half > a.t_start - cfg.background_margin && t - half < a.t_end + cfg.background_margin;
            });
        };
        for (double t = half; t + half <= rec.duration(); t += cfg.background_crop_stride) {
            if (!clear(t)) continue;
            if (auto seg = crop_recording(rec, t)) {
                data.features.push_back(feature_vector(*seg, cfg.mode, cfg.mask));
                data.classes.push_back(GateClass::Noise);
            }
        }
    }
    return data;
}

GestureModel train_model(const Recording& rec, const TrainConfig& cfg) {
    TrainingData data = collect_training_data(rec, cfg);
    if (data.templates.empty()) throw Error(ErrorCode::EmptyTemplates, "no gesture annotation matched a detected segment");

    GestureModel model;
    model.svm = train_svm(data.features, data.classes, cfg.svm);
    model.knn = fit(std::move(data.templates), cfg.band, cfg.mask);
    try {
        model.activation_threshold = calibrate_activation_threshold(model.knn, cfg.activation_factor);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::UncalibratedThreshold) throw;
    }
    model.audio_energy_threshold = cfg.gate.audio_energy_threshold;
    model.gyro_y_threshold = cfg.gate.gyro_y_threshold;
    return model;
}

}  // namespace jawtap
